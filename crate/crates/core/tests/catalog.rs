use num_bigint::BigInt;
use qser_core::identities::{catalog, findings, verify_all, verify_entries, DissectExpr, Mode, MIN_TRUNC};
use qser_core::qexpr::{parse, QExpr};
use qser_core::{Ring, Status};

#[test]
fn chain_children_follow_from_parent_rhs() {
    let cat = catalog();
    let mut checked = 0;
    for e in cat.iter().filter(|e| e.chain.is_some()) {
        let chain = e.chain.as_ref().unwrap();
        let parent = cat.iter().find(|p| p.id == chain.parent).unwrap();
        let ring = e.mode.ring();
        let t = 300;
        let via_parent = parent.rhs.clone().then_all(&chain.steps).evaluate_as(&e.id, t, ring).unwrap();
        let direct = e.rhs.evaluate_as(&e.id, t, ring).unwrap();
        assert_eq!(via_parent.first_difference(&direct).unwrap(), None, "{}", e.id);
        checked += 1;
    }
    assert!(checked >= 15, "only {checked} chain entries");
}

#[test]
fn leading_scalars_divide_the_lhs() {
    for e in catalog().iter().filter(|e| e.mode == Mode::Exact) {
        let Some(c) = e.rhs.leading_scalar() else { continue };
        if c.magnitude() <= &1u32.into() {
            continue;
        }
        let lhs = e.lhs.evaluate_as(&e.id, 200, Ring::INTEGERS).unwrap();
        assert_eq!(lhs.first_not_divisible(&c), None, "{} (scalar {c})", e.id);
    }
}

#[test]
fn whole_catalog_at_minimum_trunc() {
    let reports = verify_all(MIN_TRUNC);
    assert!(reports.len() >= 28);
    for r in &reports {
        assert_eq!(r.status, Status::Pass, "{} {:?} {:?}", r.id, r.counterexample, r.error);
    }
}

#[test]
fn one_wrong_entry_gives_one_failure() {
    let mut entries = catalog();
    let mut bad = entries.iter().find(|e| e.id == "e-2n+1").unwrap().clone();
    bad.id = "negative".into();
    bad.rhs = DissectExpr::expr(QExpr::Sum(vec![parse("0").unwrap(), QExpr::Int(BigInt::from(0))]));
    entries.push(bad);
    let reports = verify_entries(&entries, 60);
    let failed: Vec<_> = reports.iter().filter(|r| r.status != Status::Pass).map(|r| r.id.as_str()).collect();
    assert_eq!(failed, ["negative"]);
}

#[test]
fn quoted_findings_fail() {
    let entries: Vec<_> = findings().into_iter().map(|(e, _)| e).collect();
    assert!(verify_entries(&entries, 200).iter().all(|r| r.status == Status::Fail));
}
