use std::collections::BTreeMap;

use fieldlab_cli::report::SCHEMA;
use fieldlab_cli::{ExperimentReport, Params, ReportBuilder};
use proptest::prelude::*;

fn reports() -> impl Strategy<Value = ExperimentReport> {
    (
        "[a-z.-]{1,12}",
        prop::collection::btree_map("[a-z_]{1,6}", (0.0f64..1e3, 1e-16f64..1e3), 0..6),
        prop::collection::btree_map("[a-z_]{1,6}", -1e12f64..1e12, 0..4),
        any::<u32>(),
        prop::option::of(any::<u64>()),
    )
        .prop_map(|(id, checks, outs, ms, seed)| {
            let mut residuals = BTreeMap::new();
            let mut tolerances = BTreeMap::new();
            for (k, (r, t)) in checks {
                residuals.insert(k.clone(), r);
                tolerances.insert(k, t);
            }
            let mut r = ExperimentReport {
                schema: SCHEMA,
                id,
                inputs: BTreeMap::new(),
                outputs: outs.into_iter().map(|(k, v)| (k, serde_json::json!(v))).collect(),
                residuals,
                tolerances,
                pass: false,
                runtime_ms: ms as u64,
                seed,
            };
            r.pass = r.recompute_pass();
            r
        })
}

proptest! {
    #[test]
    fn report_json_round_trip(r in reports()) {
        let back: ExperimentReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.recompute_pass(), r.pass);
    }

    #[test]
    fn pass_iff_all_residuals_within(checks in prop::collection::vec((0.0f64..2.0, 0.5f64..1.5), 1..8)) {
        let mut b = ReportBuilder::new("p", None);
        for (i, (r, t)) in checks.iter().enumerate() {
            b.check(&format!("c{i}"), *r, *t);
        }
        let rep = b.finish();
        prop_assert_eq!(rep.pass, checks.iter().all(|(r, t)| r <= t));
        prop_assert!(rep.residuals.values().all(|v| *v >= 0.0));
    }

    #[test]
    fn params_parse_literals(x in -1e6f64..1e6, n in 0usize..100000, xs in prop::collection::vec(-1e3f64..1e3, 0..5)) {
        let list = format!("{:?}", xs);
        let p = Params::from_pairs(&[format!("x={x:?}"), format!("n={n}"), format!("xs={list}")]).unwrap();
        prop_assert_eq!(p.f64("x", 0.0).unwrap(), x);
        prop_assert_eq!(p.usize("n", 0).unwrap(), n);
        prop_assert_eq!(p.f64_list("xs", &[]).unwrap(), xs);
    }
}

#[test]
fn non_finite_residual_fails() {
    let mut b = ReportBuilder::new("nan", None);
    b.check("x", f64::NAN, 1.0);
    let r = b.finish();
    assert!(!r.pass);
    assert_eq!(r.residuals["x"], f64::MAX);
    assert!(!ReportBuilder::new("empty", None).finish().pass);
}
