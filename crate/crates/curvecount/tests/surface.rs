use curvecount::cones::dual_cone_section;
use curvecount::linalg::{dot, q_int, Q};
use curvecount::surface::{builtin_sextic_a1, load_surface_file, CoxPresentation, PicClass};
use num_traits::Signed;
use std::path::Path;

fn fixture(name: &str) -> CoxPresentation {
    load_surface_file(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)).unwrap()
}

fn catalog() -> Vec<CoxPresentation> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog");
    let mut out: Vec<CoxPresentation> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| load_surface_file(&e.unwrap().path()).unwrap())
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

fn all() -> Vec<CoxPresentation> {
    let mut v = catalog();
    v.push(fixture("toy_square.toml"));
    v.push(fixture("toy_split.toml"));
    v
}

fn qv(c: &PicClass) -> Vec<Q> {
    c.coords().iter().map(|&x| q_int(x)).collect()
}

#[test]
fn choices_express_j_in_the_i_basis() {
    for cox in all() {
        let choices = cox.admissible_choices();
        assert!(!choices.is_empty(), "{}", cox.name);
        for ch in choices {
            for (jp, &j) in ch.j.iter().enumerate() {
                let mut sum = PicClass::zero(cox.picard_rank);
                for (ip, &i) in ch.i.iter().enumerate() {
                    sum = sum.plus(&cox.class(i).scaled(ch.a[jp][ip]));
                }
                assert_eq!(&sum, cox.class(j), "{} {}", cox.name, ch.label(&cox));
            }
        }
    }
}

#[test]
fn anticanonical_is_interior_for_catalog() {
    for cox in catalog() {
        let section = dual_cone_section(&cox).unwrap();
        let k = qv(&cox.anticanonical());
        let verts = section.vertices();
        assert!(verts.len() >= cox.picard_rank, "{}", cox.name);
        // Bounded section with all vertices pairing to 1: −K is positive on
        // every nonzero element of the dual cone.
        for v in verts {
            assert_eq!(dot(&v, &k), q_int(1));
            assert!(cox.effective_cone.iter().all(|g| !dot(&v, &qv(g)).is_negative()));
        }
    }
}

#[test]
fn incidence_is_closed_under_subsets() {
    for cox in all() {
        let n = cox.n_generators();
        for m in 0..1u32 << n {
            if !cox.in_incidence(m) {
                continue;
            }
            let mut sub = m;
            loop {
                assert!(cox.in_incidence(sub), "{} {m:b} ⊇ {sub:b}", cox.name);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & m;
            }
        }
    }
}

#[test]
fn sextic_satisfies_face_hypothesis() {
    let cox = builtin_sextic_a1();
    assert!(cox.check_face_hypothesis(&cox.default_choice().unwrap()).holds);
    assert_eq!(cox.anticanonical().coords(), &[3, -1, -1, -1]);
}
