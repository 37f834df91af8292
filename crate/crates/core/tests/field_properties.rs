use essmod::field::rational::{gq, gq_real, q, qi};
use essmod::field::{
    commutative_limit_identity, essential_witness, inductive_witness_section, is_essential_field, non_essential_witness,
    residual_set, total_defect_set, Boundary, FieldModuleSpec, GPoly, Interval, PiecewiseSection, QPoly, SubspaceField,
    SymbolicSubset, GQ, Q,
};
use essmod::Error;
use proptest::prelude::*;

fn grid(n: i64) -> Q {
    q(n, 12)
}

fn subset() -> impl Strategy<Value = SymbolicSubset> {
    (
        prop::collection::vec(0i64..=12, 0..4),
        prop::collection::vec((0i64..=12, 0i64..=12, any::<bool>(), any::<bool>()), 0..4),
    )
        .prop_map(|(pts, ivs)| {
            let intervals = ivs
                .into_iter()
                .map(|(a, b, lc, hc)| Interval { lo: grid(a.min(b)), hi: grid(a.max(b)), lo_closed: lc, hi_closed: hc })
                .collect();
            SymbolicSubset::from_parts(pts.into_iter().map(grid).collect(), intervals).unwrap()
        })
}

fn small_gq() -> impl Strategy<Value = GQ> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| gq(qi(a), qi(b)))
}

/// A field on `d` coordinates, piecewise constant over cells cut at
/// multiples of 1/12, with random spanning columns.
fn subfield(d: usize) -> impl Strategy<Value = SubspaceField> {
    (
        prop::collection::btree_set(1i64..12, 0..4),
        prop::collection::vec(prop::collection::vec(prop::collection::vec(small_gq(), d), 0..=d), 9),
        prop::collection::vec(any::<bool>(), 4),
    )
        .prop_map(move |(cuts, bases, pointwise)| {
            let cuts: Vec<i64> = cuts.into_iter().collect();
            let mut cells = Vec::new();
            let mut covered = SymbolicSubset::empty();
            let mut idx = 0;
            for (i, c) in cuts.iter().enumerate() {
                if pointwise[i] {
                    let p = SymbolicSubset::point(grid(*c)).unwrap();
                    covered = covered.union(&p);
                    cells.push((p, bases[idx].clone()));
                    idx += 1;
                }
            }
            let mut edges = vec![0i64];
            edges.extend(cuts.iter().copied());
            edges.push(12);
            for w in edges.windows(2) {
                let iv = SymbolicSubset::closed(grid(w[0]), grid(w[1])).unwrap().difference(&covered);
                if iv.is_empty() {
                    continue;
                }
                covered = covered.union(&iv);
                cells.push((iv, bases[idx % bases.len()].clone()));
                idx += 1;
            }
            SubspaceField::new(d, cells).unwrap()
        })
}

fn scalar_poly() -> impl Strategy<Value = PiecewiseSection> {
    prop::collection::vec(-4i64..=4, 1..=3).prop_map(|c| {
        PiecewiseSection::polynomial(vec![GPoly::from_real(&QPoly::new(c.into_iter().map(qi).collect()))]).unwrap()
    })
}

fn combination(d: usize) -> impl Strategy<Value = PiecewiseSection> {
    prop::collection::vec(scalar_poly(), d).prop_map(move |cs| {
        cs.iter().enumerate().fold(PiecewiseSection::zero(d), |acc, (i, c)| acc.add(&PiecewiseSection::basis(d, i).mul_scalar(c).unwrap()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn set_algebra(s in subset(), t in subset()) {
        let (int, clo) = (s.interior(), s.closure());
        prop_assert!(int.subset_of(&s) && s.subset_of(&clo));
        prop_assert_eq!(clo.closure(), clo.clone());
        prop_assert_eq!(int.interior(), int);
        prop_assert_eq!(s.is_nowhere_dense(), s.is_nowhere_dense_via_closure());
        prop_assert_eq!(s.complement().complement(), s.clone());
        prop_assert_eq!(s.union(&t).complement(), s.complement().intersection(&t.complement()));
        prop_assert!(s.intersection(&t).subset_of(&s));
    }

    #[test]
    fn residual_within_total(
        (l, ms) in (1usize..=2).prop_flat_map(|d| (subfield(d), prop::collection::vec(combination(d), 4)))
    ) {
        let spec = FieldModuleSpec::standard(l);
        let y = total_defect_set(&spec).unwrap().y;
        for m in &ms {
            match residual_set(m, &spec.subfield) {
                Ok(ym) => prop_assert!(ym.subset_of(&y), "{} not in {}", ym, y),
                Err(Error::IrrationalRoot { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn criterion_coherence(l in (1usize..=2).prop_flat_map(subfield), m in (1usize..=2).prop_flat_map(combination)) {
        prop_assume!(m.d() == l.d() && !m.is_zero());
        let spec = FieldModuleSpec::standard(l.clone());
        let decision = match is_essential_field(&spec) {
            Ok(dcs) => dcs,
            Err(Error::IrrationalRoot { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(decision.essential, decision.via_closure);
        if decision.essential {
            match essential_witness(&m, &l) {
                Ok(w) => prop_assert!(w.verified()),
                Err(Error::IrrationalRoot { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        } else {
            // some standard generator sees the interval defect
            let y = decision.defect.y;
            let found = spec.generators.iter().any(|g| {
                residual_set(g, &l).map(|ym| !ym.closure().interior().is_empty()).unwrap_or(false)
                    && non_essential_witness(g, &l).map(|w| w.verified()).unwrap_or(false)
            });
            prop_assert!(found, "no witness for Y = {}", y);
            let iv = &y.intervals()[0];
            let w = inductive_witness_section(&spec, (&iv.lo, &iv.hi), None, 8).unwrap();
            prop_assert!(w.verified());
            prop_assert!(!residual_set(&w.m, &l).unwrap().is_nowhere_dense());
        }
    }

    #[test]
    fn limit_identity_on_multiples(m in (1usize..=3).prop_flat_map(combination), c in scalar_poly(), i in -2i64..=2) {
        let c = c.scale(&gq(qi(1), qi(i)));
        let n = m.mul_scalar(&c).unwrap();
        prop_assert!(commutative_limit_identity(&m, &n).unwrap());
    }
}

#[test]
fn spec_json_roundtrip_keeps_decision() {
    let iv = SymbolicSubset::open(q(3, 10), q(2, 5)).unwrap();
    let l = SubspaceField::new(2, vec![(iv.clone(), vec![vec![gq_real(qi(1)), gq(qi(0), qi(1))]]), (iv.complement(), vec![])]).unwrap();
    let spec = FieldModuleSpec::new(vec![PiecewiseSection::basis(2, 0), PiecewiseSection::basis(2, 1)], l, Boundary::Closed).unwrap();
    let text = serde_json::to_string(&spec).unwrap();
    let back: FieldModuleSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(back, spec);
    assert!(!is_essential_field(&back).unwrap().essential);
}
