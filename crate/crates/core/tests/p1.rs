use kahler_core::formulas::{p1_hf, p1_ri, P1SchemeSpec};
use kahler_core::KaehlerEngine;

fn compositions(total: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[test]
fn closed_forms_match_engine_for_every_composition() {
    let mut cases = 0;
    for mu in 1..=8 {
        for mults in compositions(mu) {
            let roots: Vec<i64> = (0..mults.len() as i64).map(|k| 2 * k - 3).collect();
            let spec = P1SchemeSpec::from_i64(&roots, &mults).expect("distinct roots");
            let e = KaehlerEngine::new(&spec.to_scheme());
            for (m, relative) in [(1, false), (2, false), (1, true)] {
                let want = e.omega_hf(m, relative).expect("in range");
                let got = p1_hf(&spec, m, relative).expect("supported");
                assert_eq!(got, want.table, "mults {mults:?}, m = {m}, relative = {relative}");
            }
            let ri = e.omega_hf(1, false).unwrap().ri.max(e.omega_hf(2, false).unwrap().ri);
            assert!(ri <= p1_ri(&spec), "mults {mults:?}: ri {ri} above {}", p1_ri(&spec));
            cases += 1;
        }
    }
    assert_eq!(cases, 255);
}

#[test]
fn form_degree_three_is_unsupported() {
    let spec = P1SchemeSpec::from_i64(&[0], &[2]).unwrap();
    assert!(p1_hf(&spec, 3, false).is_err());
}
