//! Golden-table replays and randomized property suites.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use kahler_core::formulas::{
    complex_inequalities, conic_hf, conic_three_forms_via_ideal, conjecture_probe, hp_bounds,
    hp_exact_cases, hyperplane_top_form, omega1_via_fattening, p1_hf, p1_ri, reducedness_test,
    ri_bounds, ConicSchemeSpec, DeltaSource, P1SchemeSpec,
};
use kahler_core::kaehler::top_form_hf;
use kahler_core::polyring::binom;
use kahler_core::{FatPointScheme, HFTable, KaehlerEngine, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::scheme_file::{table_matches, SchemeFile};

/// Golden files shipped with the binary, by file stem.
pub const GOLDEN: &[(&str, &str)] = &[
    ("four-points-p3", include_str!("../data/four-points-p3.json")),
    ("p1-three-roots", include_str!("../data/p1-three-roots.json")),
    ("six-points-conic", include_str!("../data/six-points-conic.json")),
    ("six-points-two-lines", include_str!("../data/six-points-two-lines.json")),
    ("nine-points-p2", include_str!("../data/nine-points-p2.json")),
    ("ten-points-p2", include_str!("../data/ten-points-p2.json")),
    ("fat-points-p3", include_str!("../data/fat-points-p3.json")),
    ("fat-points-p3-general", include_str!("../data/fat-points-p3-general.json")),
    ("eight-conic-points-nu1", include_str!("../data/eight-conic-points-nu1.json")),
    ("eight-conic-points-nu2", include_str!("../data/eight-conic-points-nu2.json")),
    ("eight-conic-points-nu3", include_str!("../data/eight-conic-points-nu3.json")),
    ("hyperplane-p5", include_str!("../data/hyperplane-p5.json")),
    ("twisted-cubic", include_str!("../data/twisted-cubic.json")),
];

pub fn golden(name: &str) -> SchemeFile {
    let text = GOLDEN
        .iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("no golden file {name}"))
        .1;
    SchemeFile::parse(text).expect("golden files parse")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Worked examples in P^1, P^2 and P^3.
    Core,
    /// Fat points on a conic: tables and closed forms.
    Conic,
    /// Randomized invariants.
    Properties,
    /// The P^5 hyperplane example and the twisted cubic probe.
    Slow,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Expected-vs-computed diff on failure, notes otherwise.
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Collects the outcome of one named check.
struct Check {
    name: String,
    start: Instant,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            start: Instant::now(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    fn ensure(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    fn table(&mut self, what: &str, expected: &[u64], got: &HFTable) {
        if !table_matches(expected, got) {
            let len = expected.len().max(got.stable_from() + 2);
            self.fail(format!(
                "{what}\n    expected: {}\n    computed: {}",
                join(expected),
                join(&got.prefix(len))
            ));
        }
    }

    fn same(&mut self, what: &str, a: &HFTable, b: &HFTable) {
        if a != b {
            let len = a.stable_from().max(b.stable_from()) + 2;
            self.fail(format!(
                "{what}\n    left:  {}\n    right: {}",
                join(&a.prefix(len)),
                join(&b.prefix(len))
            ));
        }
    }

    fn error(&mut self, e: impl std::fmt::Display) {
        self.fail(format!("error: {e}"));
    }

    fn finish(self) -> CheckResult {
        let passed = self.failures.is_empty();
        let mut lines = self.failures;
        lines.extend(self.notes);
        CheckResult {
            name: self.name,
            passed,
            detail: lines.join("\n"),
            elapsed: self.start.elapsed(),
        }
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

// ---------------------------------------------------------------------------
// Golden replays

/// Compares every expected entry of a golden file with the engine.
fn replay_into(c: &mut Check, file: &SchemeFile, engine: &KaehlerEngine) {
    let Some(exp) = &file.expected else { return };
    let w = engine.scheme();
    if let Some(hf) = &exp.hf {
        c.table("HF_W", hf, &w.hf_table());
    }
    for (&m, t) in &exp.omega {
        match engine.omega_hf(m, false) {
            Ok(o) => c.table(&format!("Omega^{m}"), t, &o.table),
            Err(e) => c.error(e),
        }
    }
    for (&m, t) in &exp.relative {
        match engine.omega_hf(m, true) {
            Ok(o) => c.table(&format!("Omega^{m}_rel"), t, &o.table),
            Err(e) => c.error(e),
        }
    }
    for (&m, &ri) in &exp.ri {
        match engine.omega_hf(m, false) {
            Ok(o) => c.ensure(o.ri == ri, || format!("ri(Omega^{m}): expected {ri}, computed {}", o.ri)),
            Err(e) => c.error(e),
        }
    }
    if let Some(r) = exp.r_w {
        c.ensure(engine.r_w() == r, || format!("r_W: expected {r}, computed {}", engine.r_w()));
    }
    if let Some(r) = exp.r_v {
        c.ensure(engine.r_v() == r, || format!("r_V: expected {r}, computed {}", engine.r_v()));
    }
    if let Some(hp) = exp.hp_top {
        match engine.hp(w.n() + 1, false) {
            Ok(v) => c.ensure(v == hp, || format!("HP of the top forms: expected {hp}, computed {v}")),
            Err(e) => c.error(e),
        }
    }
    if let Some(comment) = &file.comment {
        c.note(format!("note: {comment}"));
    }
}

fn load(c: &mut Check, name: &str) -> Option<(SchemeFile, KaehlerEngine)> {
    let file = golden(name);
    match file.scheme() {
        Ok(w) => {
            let e = KaehlerEngine::new(&w);
            Some((file, e))
        }
        Err(e) => {
            c.error(e);
            None
        }
    }
}

/// Tables and regularity indices of four reduced points in P^3, plus the
/// sharpness of the reduced regularity bounds.
pub fn four_points() -> CheckResult {
    let mut c = Check::new("four reduced points in P^3");
    if let Some((f, e)) = load(&mut c, "four-points-p3") {
        replay_into(&mut c, &f, &e);
        let w = e.scheme();
        for m in 1..=4 {
            let ri = e.omega_hf(m, false).map(|o| o.ri).unwrap_or(usize::MAX);
            match ri_bounds(w, m, false, None) {
                Ok(b) => c.ensure(b.reduced == Some(ri), || {
                    format!("reduced bound for Omega^{m} is {:?}, ri is {ri}", b.reduced)
                }),
                Err(err) => c.error(err),
            }
        }
        match reducedness_test(&e) {
            Ok(r) => c.ensure(r.reduced && r.consistent && r.hp_top == 0, || format!("{r:?}")),
            Err(err) => c.error(err),
        }
    }
    c.finish()
}

/// The P^1 scheme with roots 0, 1, 2 of multiplicities 1, 2, 3: engine, closed
/// form and golden tables.
pub fn p1_example() -> CheckResult {
    let mut c = Check::new("three fat points in P^1");
    if let Some((f, e)) = load(&mut c, "p1-three-roots") {
        replay_into(&mut c, &f, &e);
        let spec = P1SchemeSpec::from_i64(&[0, 1, 2], &[1, 2, 3]).expect("valid");
        c.ensure(p1_ri(&spec) == 8, || format!("p1_ri = {}", p1_ri(&spec)));
        for (m, rel) in [(1, false), (2, false), (1, true)] {
            match (p1_hf(&spec, m, rel), e.omega_hf(m, rel)) {
                (Ok(t), Ok(o)) => c.same(&format!("closed form vs engine, m = {m}, relative = {rel}"), &t, &o.table),
                (Err(err), _) => c.error(err),
                (_, Err(err)) => c.error(err),
            }
        }
    }
    c.finish()
}

/// Two six-point configurations with equal `HF_W` and `HF_{Omega^1}` whose
/// two- and three-form modules differ.
pub fn six_points() -> CheckResult {
    let mut c = Check::new("six points on a conic vs on two lines");
    let x = load(&mut c, "six-points-conic");
    let y = load(&mut c, "six-points-two-lines");
    if let (Some((fx, ex)), Some((fy, ey))) = (x, y) {
        replay_into(&mut c, &fx, &ex);
        replay_into(&mut c, &fy, &ey);
        c.ensure(ex.scheme().hf_table() == ey.scheme().hf_table(), || "HF_X != HF_Y".into());
        let t = |e: &KaehlerEngine, m| e.omega_hf(m, false).expect("in range");
        c.ensure(t(&ex, 1).table == t(&ey, 1).table, || "Omega^1 tables differ".into());
        let (a, b) = (t(&ex, 2).table, t(&ey, 2).table);
        let len = a.stable_from().max(b.stable_from()) + 2;
        let diff: Vec<usize> = (0..len).filter(|&i| a.value(i as i64) != b.value(i as i64)).collect();
        c.ensure(diff == [4] && a.value(4) == 4 && b.value(4) == 5, || {
            format!("Omega^2 should differ only at degree 4 (4 vs 5); differs at {diff:?}")
        });
        let (rx, ry) = (t(&ex, 3).ri, t(&ey, 3).ri);
        c.ensure((rx, ry) == (4, 5), || format!("ri(Omega^3) = {rx} vs {ry}, expected 4 vs 5"));
    }
    c.finish()
}

/// Nine and ten points in P^2, including the non-monotone stretch of
/// `HF_{Omega^1}` for the nine points.
pub fn nine_and_ten_points() -> CheckResult {
    let mut c = Check::new("nine and ten points in P^2");
    if let Some((f, e)) = load(&mut c, "nine-points-p2") {
        replay_into(&mut c, &f, &e);
        if let Ok(o) = e.omega_hf(1, false) {
            let v = o.table.display_values();
            let dip = v.windows(3).any(|w| w == [14, 13, 14]);
            c.ensure(dip, || format!("no 14 > 13 < 14 stretch in {}", join(&v)));
        }
    }
    if let Some((f, e)) = load(&mut c, "ten-points-p2") {
        replay_into(&mut c, &f, &e);
    }
    c.finish()
}

/// Fat points in P^3: regularity indices and the attained bounds.
pub fn fat_points_p3() -> CheckResult {
    let mut c = Check::new("fat points in P^3");
    if let Some((f, e)) = load(&mut c, "fat-points-p3") {
        replay_into(&mut c, &f, &e);
        let w = e.scheme();
        for m in 1..=4 {
            let ri = e.omega_hf(m, false).map(|o| o.ri).unwrap_or(0);
            match ri_bounds(w, m, false, None) {
                Ok(b) => {
                    let bound = b.fat.unwrap_or(0);
                    c.ensure(bound >= ri, || format!("Omega^{m}: bound {bound} < ri {ri}"));
                    if m <= 3 {
                        c.ensure(bound == m + 4 && ri == m + 4, || {
                            format!("Omega^{m}: bound {bound}, ri {ri}, expected both {}", m + 4)
                        });
                    }
                }
                Err(err) => c.error(err),
            }
        }
    }
    if let Some((f, e)) = load(&mut c, "fat-points-p3-general") {
        replay_into(&mut c, &f, &e);
        let w = e.scheme();
        c.ensure(w.support().in_general_position(), || "support not in general position".into());
        for m in 1..=4 {
            let ri = e.omega_hf(m, false).map(|o| o.ri).unwrap_or(0);
            match ri_bounds(w, m, false, None) {
                Ok(b) => c.ensure(b.general_position == Some(ri), || {
                    format!("Omega^{m}: general position bound {:?}, ri {ri}", b.general_position)
                }),
                Err(err) => c.error(err),
            }
        }
    }
    c.finish()
}

fn conic_spec(c: &mut Check, f: &SchemeFile, w: &FatPointScheme) -> Option<ConicSchemeSpec> {
    let conic = match f.conic_poly() {
        Ok(Some(p)) => p,
        Ok(None) => {
            c.fail("golden file has no conic");
            return None;
        }
        Err(e) => {
            c.error(e);
            return None;
        }
    };
    match ConicSchemeSpec::new(conic, w.clone()) {
        Ok(s) => Some(s),
        Err(e) => {
            c.error(e);
            None
        }
    }
}

/// Eight points on a conic with multiplicity `ν`: golden tables, and the closed
/// forms for `m = 1, 2, 3` against the engine.
pub fn conic_example(nu: u32) -> CheckResult {
    let mut c = Check::new(format!("eight conic points, multiplicity {nu}"));
    if let Some((f, e)) = load(&mut c, &format!("eight-conic-points-nu{nu}")) {
        replay_into(&mut c, &f, &e);
        if let Some(spec) = conic_spec(&mut c, &f, e.scheme()) {
            for m in 1..=3 {
                let eng = e.omega_hf(m, false).expect("in range").table;
                match conic_hf(&spec, m, DeltaSource::Printed) {
                    Ok(t) => c.same(&format!("closed form vs engine, Omega^{m}"), &t, &eng),
                    Err(err) => c.error(err),
                }
            }
            match conic_three_forms_via_ideal(&spec) {
                Ok(t) => c.same("S/(M I_(nu-1)X) shifted vs engine Omega^3", &t, &e.omega_hf(3, false).expect("in range").table),
                Err(err) => c.error(err),
            }
        }
    }
    c.finish()
}

/// `HF_{Omega^2}` for the eight conic points through the engine and the closed
/// form, with stable values `(3ν² - ν - 2) s / 2`.
pub fn conic_two_forms() -> CheckResult {
    let mut c = Check::new("two-forms of the eight conic points");
    for (nu, want) in [(1u32, 0u64), (2, 32), (3, 88)] {
        let Some((f, e)) = load(&mut c, &format!("eight-conic-points-nu{nu}")) else { continue };
        let expected = &f.expected.as_ref().expect("has expectations").omega[&2];
        let eng = match e.omega_hf(2, false) {
            Ok(o) => o.table,
            Err(err) => {
                c.error(err);
                continue;
            }
        };
        c.table(&format!("nu = {nu}, engine"), expected, &eng);
        if let Some(spec) = conic_spec(&mut c, &f, e.scheme()) {
            match conic_hf(&spec, 2, DeltaSource::Printed) {
                Ok(t) => c.table(&format!("nu = {nu}, closed form"), expected, &t),
                Err(err) => c.error(err),
            }
        }
        let exact = hp_exact_cases(e.scheme(), 2).map(|(v, _)| v);
        c.ensure(eng.hp() == want && exact == Some(want), || {
            format!("nu = {nu}: engine hp {}, closed form {exact:?}, expected {want}", eng.hp())
        });
    }
    c.finish()
}

fn conic_points() -> Vec<[i64; 3]> {
    vec![[1, 1, 0], [1, 3, 0], [1, 0, 1], [1, 4, 1], [1, 0, 3], [1, 1, 4], [1, 4, 3], [1, 3, 4]]
}

/// Closed forms against the engine for `s = 4..=7` points of the conic with
/// multiplicity up to 3, covering every case of the correction terms. For
/// `s = 5` the printed case table is known to be off; there the check
/// requires the generator-count corrections to agree and records where the
/// printed ones differ.
pub fn conic_sweep() -> CheckResult {
    let mut c = Check::new("conic closed forms vs engine, s = 4..7");
    let conic = kahler_core::HomogPoly::parse("3*X0^2 - 4*X0*X1 + X1^2 - 4*X0*X2 + X2^2", 3).expect("parses");
    let pts = conic_points();
    for s in 4..=7usize {
        for nu in 1..=3u32 {
            let w = FatPointScheme::from_i64(2, &pts[..s].iter().map(|p| (&p[..], nu)).collect::<Vec<_>>())
                .expect("distinct points");
            let spec = ConicSchemeSpec::new(conic.clone(), w.clone()).expect("on the conic");
            let e = KaehlerEngine::new(&w);
            for m in 1..=3 {
                let eng = e.omega_hf(m, false).expect("in range").table;
                let printed = conic_hf(&spec, m, DeltaSource::Printed).expect("valid spec");
                let gens = conic_hf(&spec, m, DeltaSource::Generators).expect("valid spec");
                let what = format!("s = {s}, nu = {nu}, Omega^{m}");
                if nu >= 2 {
                    c.same(&format!("{what}, generator corrections"), &gens, &eng);
                }
                if s == 5 && m >= 2 && printed != eng {
                    let len = printed.stable_from().max(eng.stable_from()) + 1;
                    let at: Vec<usize> = (0..len).filter(|&i| printed.value(i as i64) != eng.value(i as i64)).collect();
                    c.note(format!("{what}: printed corrections differ at degrees {at:?}"));
                } else {
                    c.same(&format!("{what}, printed corrections"), &printed, &eng);
                }
            }
            c.same(
                &format!("s = {s}, nu = {nu}, ideal quotient vs Omega^3"),
                &conic_three_forms_via_ideal(&spec).expect("equimultiple"),
                &e.omega_hf(3, false).expect("in range").table,
            );
        }
    }
    // one-forms with mixed multiplicities, both size regimes
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..12 {
        let s = rng.gen_range(4..=8usize);
        let mults: Vec<u32> = (0..s).map(|_| rng.gen_range(1..=4)).collect();
        let w = FatPointScheme::from_i64(2, &pts[..s].iter().zip(&mults).map(|(p, &m)| (&p[..], m)).collect::<Vec<_>>())
            .expect("distinct points");
        let spec = ConicSchemeSpec::new(conic.clone(), w.clone()).expect("on the conic");
        let eng = KaehlerEngine::new(&w).omega_hf(1, false).expect("in range").table;
        c.same(&format!("mults {mults:?}, Omega^1"), &conic_hf(&spec, 1, DeltaSource::Printed).expect("valid"), &eng);
    }
    c.finish()
}

/// The two-form complex inequality, with equality past stabilization for an
/// equimultiple scheme in P^2.
pub fn complex_check() -> CheckResult {
    let mut c = Check::new("two-form complex inequality");
    if let Some((_, e)) = load(&mut c, "eight-conic-points-nu2") {
        let mut equal_seen = false;
        match complex_inequalities(&e, 0..=20) {
            Ok(rs) => {
                for (i, r) in rs.iter().enumerate() {
                    c.ensure(r.ok(), || format!("degree {i}: {r:?}"));
                    equal_seen |= r.equality_expected && r.lhs == 32;
                }
            }
            Err(err) => c.error(err),
        }
        c.ensure(equal_seen, || "no degree with expected equality at 32".into());
    }
    c.finish()
}

/// Seven fat points on a hyperplane in P^5: the top-form table from `HF_Y`.
pub fn hyperplane_p5() -> CheckResult {
    let mut c = Check::new("seven fat points on a hyperplane in P^5");
    let f = golden("hyperplane-p5");
    match (f.scheme(), f.hyperplane_poly()) {
        (Ok(w), Ok(Some(h))) => {
            let want = &f.expected.as_ref().expect("has expectations").omega[&6];
            match hyperplane_top_form(&w, &h) {
                Ok(t) => c.table("Omega^6 from HF_Y", want, &t),
                Err(err) => c.error(err),
            }
            match KaehlerEngine::new(&w).hp(6, false) {
                Ok(hp) => c.ensure(hp == 337, || format!("engine Hilbert polynomial {hp}, expected 337")),
                Err(err) => c.error(err),
            }
            c.note("engine cross-check covers the stable value only");
        }
        (Err(e), _) => c.error(e),
        (_, Err(e)) => c.error(e),
        (_, Ok(None)) => c.fail("golden file has no hyperplane"),
    }
    c.finish()
}

/// Ten fat points on the twisted cubic: `HP(Omega^4) = HP_Y = 141`.
pub fn twisted_cubic() -> CheckResult {
    let mut c = Check::new("twisted cubic top-form probe");
    if let Some((f, e)) = load(&mut c, "twisted-cubic") {
        replay_into(&mut c, &f, &e);
        match conjecture_probe(&e) {
            Ok(p) => c.ensure(p.hp_top == 141 && p.hp_y == 141 && p.agree, || format!("{p:?}")),
            Err(err) => c.error(err),
        }
        // The polynomial is a sum of one-point terms; recompute each from a
        // certified one-point table.
        let mut total = 0;
        for &m in e.scheme().mults() {
            let one = FatPointScheme::from_i64(3, &[(&[1, 0, 0, 0], m)]).expect("valid");
            match KaehlerEngine::new(&one).omega_hf(4, false) {
                Ok(o) => total += o.hp(),
                Err(err) => c.error(err),
            }
        }
        c.ensure(total == 141, || format!("sum of one-point tables is {total}"));
    }
    c.finish()
}

// ---------------------------------------------------------------------------
// Randomized properties

/// Random fat point scheme with `n ≤ 3`, `s ≤ 5`, `m_j ≤ max_mult` and affine
/// coordinates in `-4..=4`.
pub fn random_scheme(rng: &mut impl Rng, max_mult: u32) -> FatPointScheme {
    let n = rng.gen_range(1..=3usize);
    let s = rng.gen_range(1..=5usize);
    let mults: Vec<u32> = (0..s).map(|_| rng.gen_range(1..=max_mult)).collect();
    random_scheme_with(rng, n, &mults)
}

fn random_scheme_with(rng: &mut impl Rng, n: usize, mults: &[u32]) -> FatPointScheme {
    let mut pool: Vec<Vec<i64>> = Vec::new();
    while pool.len() < mults.len() {
        let p: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
        if !pool.contains(&p) {
            pool.push(p);
        }
    }
    pool.shuffle(rng);
    let pts = pool.into_iter().zip(mults).map(|(p, &m)| {
        let mut v = vec![Rational::from_integer(1.into())];
        v.extend(p.into_iter().map(|x| Rational::from_integer(x.into())));
        (v, m)
    });
    FatPointScheme::new(n, pts.collect::<Vec<_>>()).expect("distinct affine points")
}

#[derive(Debug, Clone, Copy)]
pub struct PropertyOptions {
    pub cases: usize,
    pub seed: u64,
}

impl Default for PropertyOptions {
    fn default() -> Self {
        PropertyOptions { cases: 100, seed: 20261019 }
    }
}

fn check_instance(w: &FatPointScheme, checks: &mut [Check; 8]) {
    let n = w.n();
    let e = KaehlerEngine::new(w);
    let tag = format!("{w:?}");
    let [koszul, top, laws, hp, ri, fatten, rel, reduced] = checks;

    let mut abs = Vec::new();
    for m in 1..=n + 1 {
        match e.omega_hf(m, false) {
            Ok(o) => abs.push(o),
            Err(err) => {
                laws.fail(format!("{tag}: {err}"));
                return;
            }
        }
    }
    let mut relt = Vec::new();
    for m in 1..=n {
        match e.omega_hf(m, true) {
            Ok(o) => relt.push(o),
            Err(err) => {
                laws.fail(format!("{tag}: {err}"));
                return;
            }
        }
    }
    let top_ri = abs.iter().chain(&relt).map(|o| o.ri).max().unwrap_or(0);

    let bad: Vec<usize> = (0..=top_ri + 1).filter(|&d| !e.koszul_check(d)).collect();
    koszul.ensure(bad.is_empty(), || format!("{tag}: fails in degrees {bad:?}"));

    match top_form_hf(w) {
        Ok(t) => top.same(&tag, &t.table, &abs[n].table),
        Err(err) => top.fail(format!("{tag}: {err}")),
    }

    let r_w = e.r_w();
    let alpha = w.initial_degree() as usize;
    for o in abs.iter().chain(&relt) {
        let (m, k) = if o.relative {
            (o.m, binom(n as u64, o.m as u64))
        } else {
            (o.m, binom(n as u64 + 1, o.m as u64))
        };
        let name = format!("{tag} {}Omega^{m}", if o.relative { "relative " } else { "" });
        for i in 0..m {
            laws.ensure(o.value(i as i64) == 0, || format!("{name}: HF({i}) != 0"));
        }
        for i in m..(alpha + m).saturating_sub(1) {
            let want = k * binom((n + i - m) as u64, n as u64);
            laws.ensure(o.value(i as i64) == want, || {
                format!("{name}: HF({i}) = {}, expected {want}", o.value(i as i64))
            });
        }
        for i in r_w + m..o.ri {
            laws.ensure(o.value(i as i64) > o.value(i as i64 + 1), || {
                format!("{name}: not strictly decreasing at {i}")
            });
        }
        if !w.is_reduced() {
            match hp_bounds(w, m, o.relative) {
                Ok(b) => hp.ensure(b.contains(o.hp()), || format!("{name}: hp {} outside {b:?}", o.hp())),
                Err(err) => hp.fail(format!("{name}: {err}")),
            }
        }
        if !o.relative {
            if let Some((v, case)) = hp_exact_cases(w, m) {
                hp.ensure(v == o.hp(), || format!("{name}: hp {} but {case:?} gives {v}", o.hp()));
            }
        }
        match ri_bounds(w, m, o.relative, Some(abs[0].ri)) {
            Ok(b) => {
                let best = b.best();
                ri.ensure(best.is_none_or(|x| x >= o.ri), || format!("{name}: ri {} above {b:?}", o.ri));
            }
            Err(err) => ri.fail(format!("{name}: {err}")),
        }
    }

    fatten.same(&tag, &omega1_via_fattening(w), &abs[0].table);

    let hw = w.hf_table();
    let len = relt[0].ri.max(abs[0].ri).max(hw.stable_from() + 1) + 2;
    let bad: Vec<usize> = (0..len)
        .filter(|&i| {
            let i = i as i64;
            relt[0].value(i) + hw.value(i - 1) != abs[0].value(i)
        })
        .collect();
    rel.ensure(bad.is_empty(), || format!("{tag}: relative identity fails at {bad:?}"));

    match reducedness_test(&e) {
        Ok(r) => reduced.ensure(r.consistent && r.hp_top == abs[n].hp(), || format!("{tag}: {r:?}")),
        Err(err) => reduced.fail(format!("{tag}: {err}")),
    }
}

/// The invariant suites on `cases` random schemes (`n ≤ 3`, `s ≤ 5`,
/// `m_j ≤ 3`) plus `cases` random equimultiple schemes `(ν+1)X` with `ν ≤ 3`.
pub fn property_suites(opts: PropertyOptions) -> Vec<CheckResult> {
    let mut checks = [
        Check::new("Koszul alternating sum up to stabilization"),
        Check::new("top forms: Jacobian jets vs engine"),
        Check::new("zero range, initial binomial values, strict decrease"),
        Check::new("Hilbert polynomial bounds and exact values"),
        Check::new("regularity index bounds dominate"),
        Check::new("one-forms via the fattening"),
        Check::new("relative one-forms identity"),
        Check::new("reducedness from the top-form polynomial"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut nonreduced = 0;
    for _ in 0..opts.cases {
        let w = random_scheme(&mut rng, 3);
        nonreduced += usize::from(!w.is_reduced());
        check_instance(&w, &mut checks);
    }
    let mut out: Vec<CheckResult> = checks
        .into_iter()
        .map(|mut c| {
            c.note(format!("{} random schemes, {nonreduced} non-reduced, seed {}", opts.cases, opts.seed));
            c.finish()
        })
        .collect();

    let mut c = Check::new("top-form polynomial of (nu+1)X equals deg nuX");
    for _ in 0..opts.cases {
        let n = rng.gen_range(1..=3usize);
        let s = rng.gen_range(1..=5usize);
        let nu = rng.gen_range(1..=3u32);
        let w = random_scheme_with(&mut rng, n, &vec![nu + 1; s]);
        let want = s as u64 * binom((nu as usize + n - 1) as u64, n as u64);
        let deg = w.shifted(-1).expect("nu >= 1").degree();
        let e = KaehlerEngine::new(&w);
        match e.omega_hf(n + 1, false) {
            Ok(o) => c.ensure(o.hp() == want && deg == want, || {
                format!("{w:?}: table hp {}, deg nuX {deg}, closed form {want}", o.hp())
            }),
            Err(err) => c.error(err),
        }
    }
    c.note(format!("{} random equimultiple schemes", opts.cases));
    out.push(c.finish());
    out
}

// ---------------------------------------------------------------------------

pub fn run_suite(suite: Suite, props: PropertyOptions) -> Vec<CheckResult> {
    match suite {
        Suite::Core => vec![four_points(), p1_example(), six_points(), nine_and_ten_points(), fat_points_p3()],
        Suite::Conic => vec![
            conic_example(1),
            conic_example(2),
            conic_example(3),
            conic_two_forms(),
            conic_sweep(),
            complex_check(),
        ],
        Suite::Properties => property_suites(props),
        Suite::Slow => vec![hyperplane_p5(), twisted_cubic()],
    }
}

/// One line per check, with the diff or notes indented below.
pub fn render_results(results: &[CheckResult], timings: bool) -> String {
    let mut out = String::new();
    for r in results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        if timings {
            let _ = writeln!(out, "{status}  {}  ({:.2} s)", r.name, r.elapsed.as_secs_f64());
        } else {
            let _ = writeln!(out, "{status}  {}", r.name);
        }
        for line in r.detail.lines() {
            let _ = writeln!(out, "      {line}");
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", results.len(), failed);
    out
}
