//! Executable checks of the identities satisfied by the generators, and the
//! reduction to the `C_2` Poisson algebra.

pub mod c2;

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fields::{Engine, OperatorExpr};
use crate::fock::{
    validate_pairings, weight, Basis, Charge, FockMonomial, FockState, KMode, Mode, TermJson,
};
use crate::scalar::{binomial, factorial, ScalarQ};
use crate::wgen::{self, Family};

pub use c2::{c2_reduce, matrix_rank, C2Mono, C2Poly};

pub const DEFAULT_SEED: u64 = 7;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub passed: bool,
    /// Sign that held in an "up to sign" comparison.
    pub sign: Option<i64>,
    pub seed: Option<u64>,
    /// First nonzero residual when the check failed.
    pub witness: Option<FockState>,
    pub millis: u64,
    pub notes: Vec<String>,
}

impl CheckReport {
    /// JSON form. `millis` is written as 0 unless `timing` is set, so that
    /// reports are byte-stable across runs.
    pub fn to_json(&self, timing: bool) -> Value {
        let mut v = json!({
            "check": self.check,
            "params": Value::Object(self.params.clone().into_iter().collect::<Map<_, _>>()),
            "verdict": if self.passed { "pass" } else { "fail" },
            "sign": self.sign,
            "seed": self.seed,
            "witness": self.witness.as_ref().map(|w| serde_json::to_value(w.to_json()).expect("serializable")),
            "millis": if timing { self.millis } else { 0 },
        });
        if !self.notes.is_empty() {
            v["note"] = Value::String(self.notes.join("; "));
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<CheckReport> {
        let bad = |what: &str| Error::Parse(format!("check report: {what}"));
        let params: BTreeMap<String, Value> = v["params"]
            .as_object()
            .ok_or_else(|| bad("missing params"))?
            .clone()
            .into_iter()
            .collect();
        let witness = match &v["witness"] {
            Value::Null => None,
            w => {
                let n = params
                    .get("N")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad("witness without N"))? as usize;
                let terms: Vec<TermJson> =
                    serde_json::from_value(w.clone()).map_err(|e| bad(&e.to_string()))?;
                Some(FockState::from_json(n, &terms)?)
            }
        };
        let passed = match v["verdict"].as_str() {
            Some("pass") => true,
            Some("fail") => false,
            _ => return Err(bad("verdict")),
        };
        Ok(CheckReport {
            check: v["check"].as_str().ok_or_else(|| bad("check"))?.to_string(),
            params,
            passed,
            sign: v["sign"].as_i64(),
            seed: v["seed"].as_u64(),
            witness,
            millis: v["millis"].as_u64().unwrap_or(0),
            notes: v
                .get("note")
                .and_then(Value::as_str)
                .map(|s| s.split("; ").map(String::from).collect())
                .unwrap_or_default(),
        })
    }

    pub fn note_containing(&self, needle: &str) -> Option<&str> {
        self.notes
            .iter()
            .find(|s| s.contains(needle))
            .map(String::as_str)
    }
}

/// Accumulates sub-assertions into a report.
struct Recorder {
    rep: CheckReport,
    start: Instant,
}

impl Recorder {
    fn new(check: &str, e: &Engine) -> Self {
        let mut r = Self::bare(check);
        r.param("N", e.rank());
        r.param("K", e.k_mode().label());
        r
    }

    fn bare(check: &str) -> Self {
        Recorder {
            rep: CheckReport {
                check: check.to_string(),
                params: BTreeMap::new(),
                passed: true,
                sign: None,
                seed: None,
                witness: None,
                millis: 0,
                notes: Vec::new(),
            },
            start: Instant::now(),
        }
    }

    fn param(&mut self, key: &str, v: impl Into<Value>) {
        self.rep.params.insert(key.to_string(), v.into());
    }

    fn seed(&mut self, seed: u64) {
        self.rep.seed = Some(seed);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.rep.notes.push(s.into());
    }

    fn fail(&mut self, label: &str, witness: FockState) {
        if self.rep.passed {
            self.rep.witness = Some(witness);
        }
        self.rep.passed = false;
        self.rep.notes.push(format!("failed: {label}"));
    }

    fn zero(&mut self, label: &str, v: &FockState) -> bool {
        if v.is_zero() {
            return true;
        }
        self.fail(label, v.clone());
        false
    }

    fn equal(&mut self, label: &str, lhs: &FockState, rhs: &FockState) -> bool {
        self.zero(label, &lhs.sub(rhs))
    }

    fn scalar_equal(&mut self, n: usize, label: &str, lhs: &ScalarQ, rhs: &ScalarQ) -> bool {
        let d = lhs - rhs;
        self.zero(label, &FockState::vacuum(n).scale(&d))
    }

    fn holds(&mut self, label: &str, ok: bool, witness: impl FnOnce() -> FockState) -> bool {
        if !ok {
            self.fail(label, witness());
        }
        ok
    }

    /// `lhs = ±rhs`; records the sign that held.
    fn up_to_sign(&mut self, label: &str, lhs: &FockState, rhs: &FockState) -> Option<i64> {
        let s = if lhs == rhs {
            Some(1)
        } else if *lhs == rhs.neg() {
            Some(-1)
        } else {
            None
        };
        match s {
            Some(sign) => {
                if self.rep.sign.is_none() {
                    self.rep.sign = Some(sign);
                }
                self.note(format!("sign[{label}] = {sign:+}"));
            }
            None => self.fail(label, lhs.sub(rhs)),
        }
        s
    }

    fn finish(mut self) -> CheckReport {
        self.rep.millis = self.start.elapsed().as_millis() as u64;
        self.rep
    }
}

/// Random state in the sector `e^{sector·Y}`: a few monomials with up to three
/// modes of depth at most `max_depth` and small nonzero integer coefficients.
pub fn random_state(
    e: &Engine,
    rng: &mut ChaCha8Rng,
    sector: i64,
    terms: usize,
    max_depth: u32,
) -> FockState {
    let n = e.rank();
    let charge = Charge::basis_multiple(n, Basis::Y, sector);
    let mut v = FockState::zero();
    while v.is_zero() {
        for _ in 0..terms {
            let len = rng.gen_range(0..=3);
            let modes = (0..len)
                .map(|_| Mode {
                    sym: rng.gen_range(0..=n) as u16,
                    depth: rng.gen_range(1..=max_depth),
                })
                .collect();
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-4..=4);
            }
            v.add_term(
                FockMonomial::new(charge.clone(), modes),
                ScalarQ::from_int(c),
            );
        }
    }
    v
}

fn require_critical(e: &Engine) -> Result<()> {
    if e.k_mode().is_critical() {
        Ok(())
    } else {
        Err(Error::NotCritical)
    }
}

fn sym_engine_like(e: &Engine) -> Result<Engine> {
    Ok(
        Engine::with_orientation(e.rank(), KMode::Symbolic, e.gram().orientation())?
            .with_budget(e.budget()),
    )
}

fn screenings(e: &Engine) -> Vec<(String, Charge)> {
    let n = e.rank();
    let mut out = vec![("Q".to_string(), Charge::basis(n, Basis::Q))];
    for i in 1..n {
        out.push((format!("A{i}"), Charge::basis(n, Basis::A(i))));
    }
    out
}

fn screen_into(rec: &mut Recorder, e: &Engine, v: &FockState, label: &str) -> Result<()> {
    for (name, b) in screenings(e) {
        match e.lattice_mode(&b, 0, v) {
            Ok(r) => {
                rec.zero(&format!("e^{name}_(0) {label}"), &r);
            }
            Err(err @ Error::NonLocal { .. }) => {
                rec.note(format!("e^{name}_(0) {label}: {err}"));
                rec.fail(&format!("e^{name}_(0) {label} is non-local"), v.clone());
            }
            Err(err) => return Err(err),
        }
    }
    Ok(())
}

/// The pairings behind the screening-commutator table, under the engine's
/// reading of the Gram matrix.
pub fn check_pairings(e: &Engine) -> Result<CheckReport> {
    let mut rec = Recorder::new("pairings", e);
    pairings_into(&mut rec, e)?;
    Ok(rec.finish())
}

fn pairings_into(rec: &mut Recorder, e: &Engine) -> Result<()> {
    let report = validate_pairings(e.rank(), e.gram().orientation())?;
    for p in report.entries.iter() {
        rec.scalar_equal(e.rank(), &p.label, &p.actual, &p.expected);
    }
    Ok(())
}

/// All screening operators `e^{∫Q}_{(0)}`, `e^{∫A_i}_{(0)}` annihilate `v`.
pub fn check_screening_kernel(e: &Engine, v: &FockState, label: &str) -> Result<CheckReport> {
    let mut rec = Recorder::new("kernel", e);
    rec.param("state", label);
    screen_into(&mut rec, e, v, label)?;
    Ok(rec.finish())
}

/// Screening kernels of `E`, `H`, `F`, `W'_m`, `W''_m`, `W_m` and `U_m`.
/// Families with a pole at the engine's level are skipped with a note.
pub fn check_kernel_suite(e: &Engine) -> Result<CheckReport> {
    let mut rec = Recorder::new("kernel", e);
    pairings_into(&mut rec, e)?;
    let mut states: Vec<(String, FockState)> = vec![
        ("E".into(), wgen::e_state(e)),
        ("H".into(), wgen::h_state(e)?),
        ("F".into(), wgen::f_state(e)?),
    ];
    let mut family =
        |name: &str, built: Result<Vec<FockState>>, rec: &mut Recorder| -> Result<()> {
            match built {
                Ok(v) => {
                    for (m, s) in v.into_iter().enumerate().skip(1) {
                        states.push((format!("{name}{m}"), s));
                    }
                    Ok(())
                }
                Err(err @ Error::Pole { .. }) => {
                    rec.note(format!("{name} family skipped: {err}"));
                    Ok(())
                }
                Err(err) => Err(err),
            }
        };
    family("W'", wgen::build_w_prime_all(e), &mut rec)?;
    family("W''", wgen::build_w_double_all(e), &mut rec)?;
    family("W", wgen::build_w_all(e), &mut rec)?;
    family("U", wgen::build_u_all(e), &mut rec)?;
    for (label, v) in &states {
        screen_into(&mut rec, e, v, label)?;
    }
    rec.param("states", states.len());
    Ok(rec.finish())
}

/// Cases of the screening-commutator table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommCase {
    AEqual,
    ANext,
    AOther,
    QZero,
    QOne,
    QRest,
}

impl CommCase {
    pub const ALL: [CommCase; 6] = [
        CommCase::AEqual,
        CommCase::ANext,
        CommCase::AOther,
        CommCase::QZero,
        CommCase::QOne,
        CommCase::QRest,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CommCase::AEqual => "A_i,j=i",
            CommCase::ANext => "A_i,j=i+1",
            CommCase::AOther => "A_i,j other",
            CommCase::QZero => "Q,j=0",
            CommCase::QOne => "Q,j=1",
            CommCase::QRest => "Q,j>=2",
        }
    }

    /// Coefficient `c(m)` in `[e^b_{(m)}, F_j] = c(m) e^b_{(m-1)}`, from
    /// `[e^b_{(m)}, F_j] = (m(K-1) + (μ_j, b)) e^b_{(m-1)}`.
    pub fn coefficient(self, m: i64) -> ScalarQ {
        let base = ScalarQ::linear(m, -m);
        let k = ScalarQ::k();
        match self {
            CommCase::AEqual => base + k,
            CommCase::ANext | CommCase::QOne => base - k,
            CommCase::AOther | CommCase::QRest => base,
            CommCase::QZero => ScalarQ::linear(m - 1, 1 - m),
        }
    }
}

/// `[e^b_{(m)}, F_j] v` and the predicted `c · e^b_{(m-1)} v`.
fn commutator_sides(
    e: &Engine,
    b: &Charge,
    m: i64,
    op: &OperatorExpr,
    v: &FockState,
) -> Result<(FockState, FockState)> {
    let left = e.lattice_mode(b, m, &e.apply_operator(op, v)?)?;
    let right = e.apply_operator(op, &e.lattice_mode(b, m, v)?)?;
    Ok((left.sub(&right), e.lattice_mode(b, m - 1, v)?))
}

/// The six cases of the screening-commutator table on `trials` random states
/// per case, states in `H_{sY}` with `s ∈ {-1,0,1}` and mode index
/// `m ∈ {-1,0,1}`. The `Q, j = 0` entry used is `(m-1)(K-1)`; the report also
/// records how often the alternative `(m+1)(K-1)` would have held.
pub fn check_comm_lemma(e: &Engine, trials: usize, seed: u64) -> Result<CheckReport> {
    let mut rec = Recorder::new("comm", e);
    rec.seed(seed);
    rec.param("trials", trials);
    let n = e.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f: Vec<OperatorExpr> = (0..=n).map(|i| wgen::f_op(e, i)).collect::<Result<_>>()?;
    let mut alt_held = 0usize;
    let mut alt_nontrivial = 0usize;
    for case in CommCase::ALL {
        for _ in 0..trials {
            let sector = rng.gen_range(-1..=1);
            let m = rng.gen_range(-1..=1);
            let v = random_state(e, &mut rng, sector, 2, 2);
            let i = rng.gen_range(1..n);
            let (b, j) = match case {
                CommCase::AEqual => (Charge::basis(n, Basis::A(i)), i),
                CommCase::ANext => (Charge::basis(n, Basis::A(i)), i + 1),
                CommCase::AOther => {
                    let choices: Vec<usize> = (0..=n).filter(|&j| j != i && j != i + 1).collect();
                    (
                        Charge::basis(n, Basis::A(i)),
                        choices[rng.gen_range(0..choices.len())],
                    )
                }
                CommCase::QZero => (Charge::basis(n, Basis::Q), 0),
                CommCase::QOne => (Charge::basis(n, Basis::Q), 1),
                CommCase::QRest => (Charge::basis(n, Basis::Q), rng.gen_range(2..=n)),
            };
            let (comm, lower) = commutator_sides(e, &b, m, &f[j], &v)?;
            let c = e.scalar(&case.coefficient(m))?;
            let label = format!("{} (j={j}, m={m}, sector {sector})", case.label());
            rec.equal(&label, &comm, &lower.scale(&c));
            if case == CommCase::QZero && !lower.is_zero() {
                alt_nontrivial += 1;
                let alt = e.scalar(&ScalarQ::linear(m + 1, -m - 1))?;
                if comm == lower.scale(&alt) {
                    alt_held += 1;
                }
            }
        }
    }
    rec.note(format!(
        "Q,j=0 with coefficient (m+1)(K-1): held on {alt_held} of {alt_nontrivial} nontrivial trials"
    ));
    Ok(rec.finish())
}

/// `e^{∫Q}_{(0)}(R̃_1 R̃_0^m |0> - ((m+1)(K-1)+1)/((m+1)(K-1)) R̃_0^{m+1}|0>) = 0`
/// with `R̃_i = u + F_i`, at `u = 0..=m+1` (enough points for a polynomial of
/// degree `m+1` in `u`).
pub fn check_screening_shift(e: &Engine, max_m: usize) -> Result<CheckReport> {
    let mut rec = Recorder::new("screening-shift", e);
    rec.param("max_m", max_m);
    let n = e.rank();
    let q = Charge::basis(n, Basis::Q);
    for m in 0..=max_m {
        let mm = (m + 1) as i64;
        let c = e.scalar(&ScalarQ::linear(mm, 1 - mm).checked_div(&ScalarQ::linear(mm, -mm))?)?;
        for u in 0..=(m as i64 + 1) {
            let shift = |i: usize| -> Result<OperatorExpr> {
                Ok(OperatorExpr::Sum(vec![
                    OperatorExpr::identity().scaled(ScalarQ::from_int(u)),
                    wgen::f_op(e, i)?,
                ]))
            };
            let r0 = shift(0)?;
            let mut p = e.vacuum();
            for _ in 0..m {
                p = e.apply_operator(&r0, &p)?;
            }
            let first = e.apply_operator(&shift(1)?, &p)?;
            let second = e.apply_operator(&r0, &p)?.scale(&c);
            let img = e.lattice_mode(&q, 0, &first.sub(&second))?;
            rec.zero(&format!("m={m}, u={u}"), &img);
        }
    }
    Ok(rec.finish())
}

/// Both sides of the binomial-product identity as polynomials in `q`, for
/// `0 ≤ k ≤ m ≤ N`. The indeterminate of `Q(K)` stands in for `q`.
pub fn hypergeom_sides(n: usize, m: usize, k: usize) -> (ScalarQ, ScalarQ) {
    let (n, m, k) = (n as i64, m as i64, k as i64);
    let q = ScalarQ::k();
    let mut lhs = ScalarQ::zero();
    for l in k..=n {
        let mut prod = ScalarQ::one();
        for j in (k + 1)..=l {
            prod = &prod * &(&ScalarQ::one() + &(&q * &ScalarQ::from_ratio(1, j)));
        }
        let c = ScalarQ::from_bigint(binomial(n - m + k, l) * binomial(l, k));
        let term = &c * &prod;
        lhs = if (l - k) % 2 == 0 {
            lhs + term
        } else {
            lhs - term
        };
    }
    let mut rhs = ScalarQ::from_rational(&BigRational::new(
        if (n - m) % 2 == 0 {
            1.into()
        } else {
            (-1).into()
        },
        factorial((n - m) as u64),
    ));
    for j in 0..(n - m) {
        rhs = &rhs * &ScalarQ::linear(1, -j);
    }
    (lhs, rhs)
}

pub fn check_hypergeom_identity(n: usize, m: usize, k: usize) -> CheckReport {
    let mut rec = Recorder::bare("hypergeom");
    rec.param("N", n);
    rec.param("m", m);
    rec.param("k", k);
    let (l, r) = hypergeom_sides(n, m, k);
    rec.scalar_equal(n.max(1), &format!("N={n}, m={m}, k={k}"), &l, &r);
    rec.finish()
}

/// Every `0 ≤ k ≤ m ≤ N ≤ max_n`.
pub fn check_hypergeom_all(max_n: usize) -> CheckReport {
    let mut rec = Recorder::bare("hypergeom");
    rec.param("N", max_n);
    let mut cases = 0;
    for n in 0..=max_n {
        for m in 0..=n {
            for k in 0..=m {
                let (l, r) = hypergeom_sides(n, m, k);
                rec.scalar_equal(max_n.max(1), &format!("N={n}, m={m}, k={k}"), &l, &r);
                cases += 1;
            }
        }
    }
    rec.param("cases", cases);
    rec.finish()
}

/// `Π_{j=1}^{N-m} (j(K-1) - K) / (j(K-1))`.
fn rearrangement_prefactor(e: &Engine, m: usize) -> Result<ScalarQ> {
    e.scalar(&wgen::w_double_prefactor(e.rank(), m).inv()?)
}

/// The rearrangement identity for arbitrary operators `X_0..X_N` applied to the
/// vacuum, for every `m = 1..N`.
pub fn check_rearrangement_ops(e: &Engine, x: &[OperatorExpr]) -> Result<CheckReport> {
    let mut rec = Recorder::new("rearrangement", e);
    rearrangement_into(&mut rec, e, x, "X")?;
    Ok(rec.finish())
}

fn rearrangement_into(rec: &mut Recorder, e: &Engine, x: &[OperatorExpr], tag: &str) -> Result<()> {
    let lhs = wgen::prime_family(e, x)?;
    let norm = wgen::normalised_family(e, x)?;
    for m in 1..=e.rank() {
        let c = rearrangement_prefactor(e, m)?;
        let signed = if m % 2 == 0 { c } else { -c };
        rec.equal(&format!("{tag}: m={m}"), &lhs[m], &norm[m].scale(&signed));
    }
    Ok(())
}

/// Rearrangement with `X_i = F_i`, and the two expressions for `W''_m`.
pub fn check_rearrangement(e: &Engine) -> Result<CheckReport> {
    let mut rec = Recorder::new("rearrangement", e);
    let n = e.rank();
    let f: Vec<OperatorExpr> = (0..=n).map(|i| wgen::f_op(e, i)).collect::<Result<_>>()?;
    rearrangement_into(&mut rec, e, &f, "F")?;
    let wp = wgen::build_w_prime_all(e)?;
    let wdd = wgen::build_w_double_all(e)?;
    for m in 1..=n {
        let lhs = wgen::w_double_from_prime(e, m, &wp[m])?;
        rec.equal(&format!("W''{m} two ways"), &lhs, &wdd[m]);
    }
    Ok(rec.finish())
}

/// The generating function of `W'_m`, coefficient by coefficient in `u`.
pub fn check_genfun(e: &Engine) -> Result<CheckReport> {
    let mut rec = Recorder::new("genfun", e);
    let n = e.rank();
    let wp = wgen::build_w_prime_all(e)?;
    let gf = wgen::generating_function_coefficients(e)?;
    for m in 1..=n {
        rec.equal(&format!("u^{}", n - m), &gf[n - m], &wp[m]);
    }
    let c = wgen::w_prime_zero_constant(e)?;
    rec.equal("u^N", &gf[n], &e.vacuum().scale(&c));
    rec.note(format!("W'_0 = ({c}) |0>"));
    rec.holds("W'_0 constant nonzero", !c.is_zero(), || e.vacuum());
    Ok(rec.finish())
}

fn d_minus_h(e: &Engine) -> Result<OperatorExpr> {
    Ok(OperatorExpr::Sum(vec![
        OperatorExpr::Translation,
        OperatorExpr::Heisenberg(wgen::h_vector(e)?, -1).scaled(-ScalarQ::one()),
    ]))
}

fn apply_pow(e: &Engine, op: &OperatorExpr, v: &FockState, times: usize) -> Result<FockState> {
    let mut cur = v.clone();
    for _ in 0..times {
        cur = e.apply_operator(op, &cur)?;
    }
    Ok(cur)
}

/// `e_m(∂ - H + μ_1, …, ∂ - H + μ_N) t = Σ_k C(N-k, m-k) W_{k(-1)} (∂ - H)^{m-k} t`
/// at `K = 0`, for `t = |0>` and `t = e^{-∫Y}`, `m = 0..N`.
pub fn check_molev(e: &Engine) -> Result<CheckReport> {
    require_critical(e)?;
    let mut rec = Recorder::new("molev", e);
    let n = e.rank();
    let h = wgen::h_vector(e)?;
    let ops: Vec<OperatorExpr> = (1..=n)
        .map(|i| {
            Ok(OperatorExpr::Sum(vec![
                OperatorExpr::Translation,
                OperatorExpr::Heisenberg(wgen::mu_vector(e, i)?.sub(&h), -1),
            ]))
        })
        .collect::<Result<_>>()?;
    let w = wgen::build_w_all(e)?;
    let dh = d_minus_h(e)?;
    let targets = [
        ("|0>", e.vacuum()),
        (
            "e^-Y",
            FockState::highest_weight(Charge::basis_multiple(n, Basis::Y, -1)),
        ),
    ];
    for (tname, t) in &targets {
        let lhs = wgen::esym_table(e, n, &ops, t)?;
        for m in 0..=n {
            let mut rhs = FockState::zero();
            for k in 0..=m {
                let c = binomial((n - k) as i64, (m - k) as i64);
                let inner = apply_pow(e, &dh, t, m - k)?;
                let term = e.nth_product(&w[k], -1, &inner)?;
                rhs.add_scaled(&term, &ScalarQ::from_bigint(c));
            }
            rec.equal(&format!("m={m} on {tname}"), &lhs[m], &rhs);
        }
    }
    Ok(rec.finish())
}

/// Closed form of `E_{(N-m)} F` at `K = 0`:
/// `(-1)^{N+1} (N-m+1)! Σ_{k=0}^{m-1} C(N-k, m-k-1) W_{k(-1)} (∂ - H)^{m-k-1} |0>`.
pub fn ef_closed_form(e: &Engine, w: &[FockState], m: usize) -> Result<FockState> {
    let n = e.rank();
    let dh = d_minus_h(e)?;
    let mut out = FockState::zero();
    for k in 0..m {
        let c = binomial((n - k) as i64, (m - k - 1) as i64);
        if c.is_zero() {
            continue;
        }
        let inner = apply_pow(e, &dh, &e.vacuum(), m - k - 1)?;
        out.add_scaled(&e.nth_product(&w[k], -1, &inner)?, &ScalarQ::from_bigint(c));
    }
    let mut pre = ScalarQ::from_bigint(factorial((n + 1 - m) as u64));
    if n % 2 == 0 {
        pre = -pre;
    }
    Ok(out.scale(&pre))
}

/// `E_{(n)} F` against the closed form for `n = -1..N-1`, vanishing for
/// `n ≥ N`, skew-symmetry for `F_{(n)} E`, and the commutator
/// `[e^{∫Y}_{(m)}, R_i] = (-m-1) e^{∫Y}_{(m-1)}` on random states.
pub fn check_ef_ope(e: &Engine, trials: usize, seed: u64) -> Result<CheckReport> {
    require_critical(e)?;
    let mut rec = Recorder::new("ef-ope", e);
    rec.seed(seed);
    let n = e.rank();
    let w = wgen::build_w_all(e)?;
    let ee = wgen::e_state(e);
    let f = wgen::f_state(e)?;
    let mut products = BTreeMap::new();
    for m in 1..=n + 1 {
        let nn = n as i64 - m as i64;
        let got = e.nth_product(&ee, nn, &f)?;
        rec.equal(&format!("E_({nn})F"), &got, &ef_closed_form(e, &w, m)?);
        products.insert(nn, got);
    }
    for nn in n as i64..=n as i64 + 1 {
        rec.zero(&format!("E_({nn})F"), &e.nth_product(&ee, nn, &f)?);
    }
    let sp = e.singular_part(&ee, &f)?;
    rec.holds(
        "singular part within 0..N-1",
        sp.keys().all(|&k| (k as usize) < n),
        || sp.values().next_back().cloned().unwrap_or_default(),
    );
    // Skew-symmetry: F_{(n)}E = Σ_j (-1)^{n+j+1} T^j(E_{(n+j)}F)/j!.
    for nn in 0..=n as i64 {
        let lhs = e.nth_product(&f, nn, &ee)?;
        let mut rhs = FockState::zero();
        let mut j = 0i64;
        while nn + j < n as i64 {
            let base = products
                .get(&(nn + j))
                .cloned()
                .map_or_else(|| e.nth_product(&ee, nn + j, &f), Ok)?;
            let t = e.translate_pow(&base, j as usize);
            let mut c = ScalarQ::from_rational(&BigRational::new(1.into(), factorial(j as u64)));
            if (nn + j + 1) % 2 != 0 {
                c = -c;
            }
            rhs.add_scaled(&t, &c);
            j += 1;
        }
        rec.equal(&format!("skew F_({nn})E"), &lhs, &rhs);
    }
    // Commutator of e^{∫Y} with R_i.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = Charge::basis(n, Basis::Y);
    for i in 1..=n {
        let r = wgen::r_op(e, i)?;
        for _ in 0..trials {
            let sector = rng.gen_range(-1..=1);
            let m = rng.gen_range(-1..=1);
            let v = random_state(e, &mut rng, sector, 2, 2);
            let (comm, lower) = commutator_sides(e, &y, m, &r, &v)?;
            rec.equal(
                &format!("[e^Y_({m}), R_{i}] sector {sector}"),
                &comm,
                &lower.scale(&ScalarQ::from_int(-m - 1)),
            );
        }
    }
    Ok(rec.finish())
}

/// At `K = 0`, `W_2..W_N` have regular OPE with `E`, `H`, `F`, `W_2..W_N`.
/// Controls: `H` with `E` is singular, and `E` with `W_2` is singular at
/// symbolic `K`.
pub fn check_centrality(e: &Engine) -> Result<CheckReport> {
    require_critical(e)?;
    let mut rec = Recorder::new("centrality", e);
    let n = e.rank();
    let w = wgen::build_w_all(e)?;
    let mut others: Vec<(String, FockState)> = vec![
        ("E".into(), wgen::e_state(e)),
        ("H".into(), wgen::h_state(e)?),
        ("F".into(), wgen::f_state(e)?),
    ];
    for (m, s) in w.iter().enumerate().skip(2) {
        others.push((format!("W{m}"), s.clone()));
    }
    for m in 2..=n {
        for (name, a) in &others {
            let sp = e.singular_part(a, &w[m])?;
            if let Some((k, v)) = sp.iter().next() {
                rec.fail(&format!("{name}_({k})W{m}"), v.clone());
            }
        }
    }
    let h_e = e.singular_part(&others[1].1, &others[0].1)?;
    rec.holds("control: H(z)E(w) singular", !h_e.is_empty(), || e.vacuum());
    let sym = sym_engine_like(e)?;
    let w2 = wgen::build_w_all(&sym)?.swap_remove(2);
    let e_w2 = sym.singular_part(&wgen::e_state(&sym), &w2)?;
    rec.holds(
        "control: E(z)W2(w) singular at symbolic K",
        !e_w2.is_empty(),
        || sym.vacuum(),
    );
    rec.note(format!(
        "control E_(n)W2 at symbolic K nonzero for n in {:?}",
        e_w2.keys().collect::<Vec<_>>()
    ));
    Ok(rec.finish())
}

/// Fermionic realization at `K = 0`, each identity up to the cocycle sign.
pub fn check_fermionic(e: &Engine) -> Result<CheckReport> {
    let fm = wgen::build_fermionic(e)?;
    let mut rec = Recorder::new("fermionic", e);
    let n = e.rank();
    let g = e.gram();
    let one = ScalarQ::one();
    rec.scalar_equal(
        n,
        "(alpha,alpha) = 1",
        &g.charge_pairing(&fm.alpha, &fm.alpha)?,
        &one,
    );
    rec.scalar_equal(
        n,
        "(beta,beta) = -1",
        &g.charge_pairing(&fm.beta, &fm.beta)?,
        &-&one,
    );
    rec.scalar_equal(
        n,
        "(alpha,beta) = 0",
        &g.charge_pairing(&fm.alpha, &fm.beta)?,
        &ScalarQ::zero(),
    );
    let h = wgen::h_state(e)?;
    rec.equal(
        "H = -beta",
        &h,
        &FockState::from_weight(&fm.beta.to_weight()).neg(),
    );

    // (a) e^{∫β}_{(-1)} Ψ^+ = ±E.
    let a = e.nth_product(&fm.e_beta, -1, &fm.psi_plus)?;
    let sign_a = rec.up_to_sign("(a) e^beta_(-1) Psi+ = E", &a, &wgen::e_state(e));

    // (∂ - H)^k e^{-∫Y} = ±(∂^k Ψ^-)_{(-1)} e^{-∫β}.
    let dh = d_minus_h(e)?;
    let e_minus_y = FockState::highest_weight(Charge::basis_multiple(n, Basis::Y, -1));
    let mut psi_terms = Vec::new();
    let mut dh_sign = None;
    for k in 0..=n {
        let lhs = apply_pow(e, &dh, &e_minus_y, k)?;
        let psi = e.nth_product(&e.translate_pow(&fm.psi_minus, k), -1, &fm.e_minus_beta)?;
        let label = format!("(d-H)^{k} e^-Y");
        match (Recorder::sign_of(&lhs, &psi), dh_sign) {
            (Some(s), None) => dh_sign = Some(s),
            (Some(s), Some(t)) if s == t => {}
            _ => rec.fail(&label, lhs.sub(&psi)),
        }
        psi_terms.push(psi);
    }
    if let Some(s) = dh_sign {
        rec.note(format!(
            "sign[(d-H)^k e^-Y = (d^k Psi-)_(-1) e^-beta] = {s:+}"
        ));
    }

    // (b) F = ±(-1)^{N+1} Σ_m W_{m(-1)} (∂^{N-m} Ψ^-)_{(-1)} e^{-∫β}.
    let w = wgen::build_w_all(e)?;
    let mut rhs = FockState::zero();
    for (m, wm) in w.iter().enumerate() {
        rhs.add_assign(&e.nth_product(wm, -1, &psi_terms[n - m])?);
    }
    if n % 2 == 1 {
        rhs = rhs.neg();
    }
    let f = wgen::f_state(e)?;
    let sign_b = rec.up_to_sign("(b) F", &f, &rhs);
    rec.rep.sign = sign_b.or(rec.rep.sign);

    // (c) fermion OPEs.
    let c = e.nth_product(&fm.psi_plus, 0, &fm.psi_minus)?;
    rec.up_to_sign("(c) Psi+_(0) Psi- = |0>", &c, &e.vacuum());
    for nn in -1..=2 {
        rec.zero(
            &format!("(c) Psi+_({nn}) Psi+"),
            &e.nth_product(&fm.psi_plus, nn, &fm.psi_plus)?,
        );
        rec.zero(
            &format!("(c) Psi-_({nn}) Psi-"),
            &e.nth_product(&fm.psi_minus, nn, &fm.psi_minus)?,
        );
    }
    let _ = sign_a;
    Ok(rec.finish())
}

impl Recorder {
    fn sign_of(lhs: &FockState, rhs: &FockState) -> Option<i64> {
        if lhs == rhs {
            Some(1)
        } else if *lhs == rhs.neg() {
            Some(-1)
        } else {
            None
        }
    }
}

/// Homogeneous weight of a state, if it has exactly one.
pub fn homogeneous_weight(e: &Engine, v: &FockState) -> Option<ScalarQ> {
    let parts = weight(e.gram(), e.k_mode(), v);
    if parts.len() == 1 {
        parts.into_keys().next()
    } else {
        None
    }
}

/// Virasoro relations of `ω` and the weights of `E`, `H`, `W_2..W_{N-1}`, `F`.
pub fn check_omega(e: &Engine) -> Result<CheckReport> {
    let mut rec = Recorder::new("omega", e);
    let n = e.rank();
    let w = wgen::build_w_all(e)?;
    let omega = wgen::build_omega(e, &w[2])?;
    let p = |k: i64, b: &FockState| e.nth_product(&omega, k, b);
    rec.equal(
        "omega_(0)omega = T omega",
        &p(0, &omega)?,
        &e.translate(&omega),
    );
    rec.equal(
        "omega_(1)omega = 2 omega",
        &p(1, &omega)?,
        &omega.scale(&ScalarQ::from_int(2)),
    );
    rec.zero("omega_(2)omega = 0", &p(2, &omega)?);
    let top = p(3, &omega)?;
    let half_c = top.coeff(&FockMonomial::highest_weight(Charge::zero(n)));
    rec.equal(
        "omega_(3)omega = (c/2)|0>",
        &top,
        &e.vacuum().scale(&half_c),
    );
    let c = &half_c * &ScalarQ::from_int(2);
    rec.param("c", c.to_string());
    rec.note(format!("central charge c = {c}"));
    let alt = wgen::build_omega_alternative(e, &w[2])?;
    let alt_ok = e.nth_product(&alt, 1, &alt)? == alt.scale(&ScalarQ::from_int(2))
        && e.nth_product(&alt, 1, &wgen::h_state(e)?)? == wgen::h_state(e)?;
    rec.note(format!(
        "alternative with H_(-1)H term satisfies omega_(1)omega = 2 omega and omega_(1)H = H: {alt_ok}"
    ));
    let mut xs: Vec<(String, FockState)> = vec![
        ("E".into(), wgen::e_state(e)),
        ("H".into(), wgen::h_state(e)?),
        ("F".into(), wgen::f_state(e)?),
    ];
    for (m, s) in w.iter().enumerate().take(n).skip(2) {
        xs.push((format!("W{m}"), s.clone()));
    }
    for (name, x) in &xs {
        match homogeneous_weight(e, x) {
            Some(d) => {
                rec.equal(
                    &format!("omega_(1){name} = {d} {name}"),
                    &p(1, x)?,
                    &x.scale(&d),
                );
            }
            None => rec.fail(&format!("{name} not homogeneous"), x.clone()),
        }
    }
    Ok(rec.finish())
}

/// `U_m` has no `(K-1)` in any denominator, and specialises at `K = 1` to
/// states annihilated by the screenings.
pub fn check_u_polynomial(e: &Engine) -> Result<CheckReport> {
    let mut rec = Recorder::new("u-poly", e);
    let n = e.rank();
    let sym = sym_engine_like(e)?;
    let u = wgen::build_u_all(&sym)?;
    let one = BigRational::one();
    let mut fully_polynomial = true;
    for (m, s) in u.iter().enumerate().skip(1) {
        for (mono, c) in s.terms() {
            fully_polynomial &= c.is_polynomial();
            if c.denominator().root_multiplicity(&one) > 0 {
                rec.fail(
                    &format!("U{m} has (K-1) in a denominator"),
                    FockState::monomial(mono.clone(), c.clone()),
                );
            }
        }
    }
    rec.note(format!(
        "all U_m coefficients polynomial in K: {fully_polynomial}"
    ));
    let at_one = Engine::with_orientation(n, KMode::at_int(1), e.gram().orientation())?
        .with_budget(e.budget());
    let direct = wgen::build_u_all(&at_one)?;
    for (m, s) in u.iter().enumerate().skip(1) {
        match at_one.specialize_state(s) {
            Ok(v) => {
                rec.equal(&format!("U{m} at K=1 two ways"), &v, &direct[m]);
                screen_into(&mut rec, &at_one, &v, &format!("U{m} at K=1"))?;
            }
            Err(err) => {
                rec.note(format!("U{m} at K=1: {err}"));
                rec.fail(&format!("U{m} does not specialise at K=1"), s.clone());
            }
        }
    }
    Ok(rec.finish())
}

impl C2Poly {
    /// The canonical state with this image: `Ē^m Π s̄^{a_s} ↦ Π s_{(-1)}^{a_s} e^{mY}`.
    pub fn lift(&self) -> FockState {
        let n = self.rank();
        let mut out = FockState::zero();
        for (m, c) in self.terms() {
            let mut modes = Vec::new();
            for (sym, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    modes.push(Mode {
                        sym: sym as u16,
                        depth: 1,
                    });
                }
            }
            let charge = Charge::basis_multiple(n, Basis::Y, m.e_power);
            out.add_term(FockMonomial::new(charge, modes), c.clone());
        }
        out
    }
}

fn c2_equal(rec: &mut Recorder, label: &str, lhs: &C2Poly, rhs: &C2Poly) -> bool {
    if lhs == rhs {
        return true;
    }
    rec.fail(label, lhs.sub(rhs).lift());
    false
}

fn c2_sign(lhs: &C2Poly, rhs: &C2Poly) -> Option<i64> {
    if lhs == rhs {
        Some(1)
    } else if *lhs == rhs.scale(&-ScalarQ::one()) {
        Some(-1)
    } else {
        None
    }
}

fn random_point(rng: &mut ChaCha8Rng, len: usize) -> Vec<BigRational> {
    (0..len)
        .map(|_| {
            let mut p: i64 = 0;
            while p == 0 {
                p = rng.gen_range(-997..=997);
            }
            let q: i64 = rng.gen_range(1..=97);
            BigRational::new(p.into(), q.into())
        })
        .collect()
}

/// Leading terms and algebraic independence at one level.
fn c2_lead_terms_into(
    rec: &mut Recorder,
    e: &Engine,
    rng: &mut ChaCha8Rng,
    points: usize,
) -> Result<()> {
    let n = e.rank();
    let tag = e.k_mode().label();
    let w = wgen::build_w_all(e)?;
    let mus: Vec<C2Poly> = (1..=n)
        .map(|i| Ok(C2Poly::linear(&wgen::mu_vector(e, i)?)))
        .collect::<Result<_>>()?;
    let mut wbar = Vec::new();
    for (m, wm) in w.iter().enumerate().skip(1) {
        let img = c2_reduce(wm)?;
        c2_equal(
            rec,
            &format!("K={tag}: W{m}bar = e_{m}(mubar)"),
            &img,
            &C2Poly::esym(n, m, &mus),
        );
        wbar.push(img);
    }
    let hbar = c2_reduce(&wgen::h_state(e)?)?;
    let q_free = wbar.iter().all(|p| !p.involves(Basis::Q));
    rec.holds(
        &format!("K={tag}: Hbar involves Qbar, Wbar do not"),
        hbar.involves(Basis::Q) && q_free,
        || hbar.lift(),
    );
    let mut ranks = Vec::new();
    for _ in 0..points {
        let pt = random_point(rng, n + 1);
        let rows: Vec<Vec<BigRational>> = wbar[1..]
            .iter()
            .map(|p| {
                (1..n)
                    .map(|j| p.derivative(Basis::A(j)).eval(&pt))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        ranks.push(matrix_rank(rows));
    }
    rec.note(format!("K={tag}: Jacobian ranks {ranks:?}"));
    rec.holds(
        &format!("K={tag}: Jacobian rank N-1"),
        ranks.iter().all(|&r| r == n - 1),
        || wbar.last().map(C2Poly::lift).unwrap_or_default(),
    );
    Ok(())
}

/// Which coefficient pattern `c2(E_{(0)}F)` follows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketPattern {
    /// Sign `s` with `{Ē,F̄} = s Σ (-1)^{k+1}(k+1) W̄_k H̄^{N-k-1}`, if any.
    pub k_plus_one: Option<i64>,
    /// Sign `s` with `{Ē,F̄} = s Σ (-1)^{k+1}(N-k) W̄_k H̄^{N-k-1}`, if any.
    pub n_minus_k: Option<i64>,
}

/// The `C_2` relations: `W̄_m = e_m(μ̄)` and independence at `K = 0` and at a
/// generic level, `Ē F̄ = Σ (-1)^{k+1} W̄_k H̄^{N-k}` at `K = 0`, the brackets
/// with `H̄` and `W̄_m`, and a report on `{Ē, F̄}`.
pub fn check_c2_relations(
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<(CheckReport, BracketPattern)> {
    let crit = Engine::new(n, KMode::at_int(0))?.with_budget(budget);
    let generic = Engine::new(n, KMode::at_ratio(3, 5))?.with_budget(budget);
    let mut rec = Recorder::new("c2", &crit);
    rec.param("K_generic", generic.k_mode().label());
    rec.seed(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    c2_lead_terms_into(&mut rec, &crit, &mut rng, 3)?;
    c2_lead_terms_into(&mut rec, &generic, &mut rng, 3)?;

    let e = &crit;
    let w = wgen::build_w_all(e)?;
    let wbar: Vec<C2Poly> = w.iter().map(c2_reduce).collect::<Result<_>>()?;
    let h = wgen::h_state(e)?;
    let ee = wgen::e_state(e);
    let f = wgen::f_state(e)?;
    let (hbar, ebar, fbar) = (c2_reduce(&h)?, c2_reduce(&ee)?, c2_reduce(&f)?);
    rec.holds("Ebar = Ebar^1", ebar == C2Poly::e_bar(n, 1), || ee.clone());

    let ef = c2_reduce(&e.nth_product(&ee, -1, &f)?)?;
    let mut rel = C2Poly::zero(n);
    for (k, wk) in wbar.iter().enumerate() {
        let t = wk.mul(&hbar.pow(n - k));
        rel = if k % 2 == 1 { rel.add(&t) } else { rel.sub(&t) };
    }
    c2_equal(
        &mut rec,
        "Ebar Fbar = sum (-1)^(k+1) Wkbar Hbar^(N-k)",
        &ef,
        &rel,
    );
    c2_equal(&mut rec, "c2(E_(-1)F) = Ebar * Fbar", &ef, &ebar.mul(&fbar));

    c2_equal(
        &mut rec,
        "{Hbar, Ebar} = Ebar",
        &c2_reduce(&e.nth_product(&h, 0, &ee)?)?,
        &ebar,
    );
    c2_equal(
        &mut rec,
        "{Hbar, Fbar} = -Fbar",
        &c2_reduce(&e.nth_product(&h, 0, &f)?)?,
        &fbar.scale(&-ScalarQ::one()),
    );
    c2_equal(
        &mut rec,
        "{Ebar, Hbar} = -{Hbar, Ebar}",
        &c2_reduce(&e.nth_product(&ee, 0, &h)?)?,
        &ebar.scale(&-ScalarQ::one()),
    );
    let hv = wgen::h_vector(e)?;
    for (m, wm) in w.iter().enumerate().skip(2) {
        c2_equal(
            &mut rec,
            &format!("c2(H_(-1)W{m}) = Hbar W{m}bar"),
            &c2_reduce(&e.apply_heisenberg_mode(&hv, -1, wm))?,
            &hbar.mul(&wbar[m]),
        );
    }
    for (m, wm) in w.iter().enumerate().skip(2) {
        let z = C2Poly::zero(n);
        c2_equal(
            &mut rec,
            &format!("{{W{m}bar, Ebar}} = 0"),
            &c2_reduce(&e.nth_product(wm, 0, &ee)?)?,
            &z,
        );
        c2_equal(
            &mut rec,
            &format!("{{W{m}bar, Fbar}} = 0"),
            &c2_reduce(&e.nth_product(wm, 0, &f)?)?,
            &z,
        );
    }

    let bracket = c2_reduce(&e.nth_product(&ee, 0, &f)?)?;
    let mut p1 = C2Poly::zero(n);
    let mut p2 = C2Poly::zero(n);
    for (k, wk) in wbar.iter().enumerate().take(n) {
        let base = wk.mul(&hbar.pow(n - k - 1));
        let s = if k % 2 == 1 { 1 } else { -1 };
        p1 = p1.add(&base.scale(&ScalarQ::from_int(s * (k as i64 + 1))));
        p2 = p2.add(&base.scale(&ScalarQ::from_int(s * (n - k) as i64)));
    }
    let pattern = BracketPattern {
        k_plus_one: c2_sign(&bracket, &p1),
        n_minus_k: c2_sign(&bracket, &p2),
    };
    rec.note(format!(
        "{{Ebar,Fbar}} = {bracket}; matches (k+1)-pattern with sign {:?}, (N-k)-pattern with sign {:?}",
        pattern.k_plus_one, pattern.n_minus_k
    ));
    Ok((rec.finish(), pattern))
}

/// Level a check needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Any,
    Critical,
    /// Any level other than `K ∈ {0, 1}`.
    Regular,
}

/// Check names accepted by [`run_check`], with the level each needs.
pub const CHECKS: [(&str, Level); 14] = [
    ("c2", Level::Any),
    ("centrality", Level::Critical),
    ("comm", Level::Any),
    ("ef-ope", Level::Critical),
    ("fermionic", Level::Critical),
    ("genfun", Level::Any),
    ("hypergeom", Level::Any),
    ("kernel", Level::Any),
    ("molev", Level::Critical),
    ("omega", Level::Regular),
    ("pairings", Level::Any),
    ("rearrangement", Level::Any),
    ("screening-shift", Level::Any),
    ("u-poly", Level::Any),
];

pub fn level_of(name: &str) -> Option<Level> {
    CHECKS.iter().find(|(n, _)| *n == name).map(|(_, l)| *l)
}

/// Checks applicable at the engine's level.
pub fn applicable_checks(k: &KMode) -> Vec<&'static str> {
    CHECKS
        .iter()
        .filter(|(_, l)| match l {
            Level::Any => true,
            Level::Critical => k.is_critical(),
            Level::Regular => match k {
                KMode::Symbolic => true,
                KMode::At(v) => !v.is_zero() && !v.is_one(),
            },
        })
        .map(|(n, _)| *n)
        .collect()
}

/// Runs one named check with default parameters.
pub fn run_check(name: &str, e: &Engine, seed: u64) -> Result<CheckReport> {
    match name {
        "pairings" => check_pairings(e),
        "kernel" => check_kernel_suite(e),
        "comm" => check_comm_lemma(e, 100, seed),
        "screening-shift" => check_screening_shift(e, e.rank()),
        "hypergeom" => Ok(check_hypergeom_all(e.rank().max(6))),
        "rearrangement" => check_rearrangement(e),
        "genfun" => check_genfun(e),
        "molev" => check_molev(e),
        "ef-ope" => check_ef_ope(e, 20, seed),
        "centrality" => check_centrality(e),
        "fermionic" => check_fermionic(e),
        "omega" => check_omega(e),
        "u-poly" => check_u_polynomial(e),
        "c2" => check_c2_relations(e.rank(), seed, e.budget()).map(|(r, _)| r),
        _ => Err(Error::Parse(format!("unknown check {name:?}"))),
    }
}

/// Family sets used when a report lists generator names.
pub fn default_families(k: &KMode) -> std::collections::BTreeSet<Family> {
    Family::defaults(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Orientation;

    fn sym(n: usize) -> Engine {
        Engine::new(n, KMode::Symbolic).unwrap()
    }

    #[test]
    fn q_zero_coefficient_is_shifted_by_one() {
        // (Q, μ_0) = 1 - K, so m(K-1) + (μ_0, Q) = (m-1)(K-1).
        for m in -2..3 {
            assert_eq!(
                CommCase::QZero.coefficient(m),
                ScalarQ::linear(m - 1, 1 - m)
            );
        }
    }

    #[test]
    fn comm_small() {
        let r = check_comm_lemma(&sym(2), 10, 3).unwrap();
        assert!(r.passed, "{:?}", r.notes);
        assert_eq!(r.seed, Some(3));
    }

    #[test]
    fn hypergeom_rhs_by_hand() {
        // N = 2, m = 1, k = 0: 1 - 2(1+q) + (1+q)(1+q/2) = -q + q^2/2 ... and
        // the right side is -q.
        let (l, r) = hypergeom_sides(1, 0, 0);
        assert_eq!(l, r);
        assert_eq!(r, -ScalarQ::k());
        assert!(check_hypergeom_all(4).passed);
    }

    #[test]
    fn n2_critical_suite() {
        let e = Engine::new(2, KMode::at_int(0)).unwrap();
        for name in applicable_checks(e.k_mode()) {
            let r = run_check(name, &e, DEFAULT_SEED).unwrap();
            assert!(r.passed, "{name}: {:?}", r.notes);
        }
    }

    #[test]
    fn ef_products_at_n2() {
        let e = Engine::new(2, KMode::at_int(0)).unwrap();
        let ee = wgen::e_state(&e);
        let f = wgen::f_state(&e).unwrap();
        let h = wgen::h_state(&e).unwrap();
        assert_eq!(
            e.nth_product(&ee, 1, &f).unwrap(),
            e.vacuum().scale(&ScalarQ::from_int(-2))
        );
        assert_eq!(
            e.nth_product(&ee, 0, &f).unwrap(),
            h.scale(&ScalarQ::from_int(2))
        );
    }

    #[test]
    fn omega_central_charge_at_n2() {
        // Affine sl_2 at level K - 2.
        let r = check_omega(&sym(2)).unwrap();
        assert!(r.passed, "{:?}", r.notes);
        let c = ScalarQ::linear(3, -6).checked_div(&ScalarQ::k()).unwrap();
        assert_eq!(r.params["c"], Value::String(c.to_string()));
    }

    #[test]
    fn reversed_gram_fails_pairings() {
        let e = Engine::with_orientation(2, KMode::Symbolic, Orientation::Reversed).unwrap();
        let r = check_pairings(&e).unwrap();
        assert!(!r.passed);
        assert!(r.witness.is_some());
    }

    #[test]
    fn non_kernel_state_has_witness() {
        let e = sym(3);
        let q = e.basis_vector(Basis::Q);
        let v = e.apply_heisenberg_mode(&q, -2, &e.vacuum());
        let r = check_screening_kernel(&e, &v, "Q_(-2)").unwrap();
        assert!(!r.passed);
        assert!(!r.witness.unwrap().is_zero());
    }

    #[test]
    fn report_json_round_trip() {
        let e = Engine::with_orientation(2, KMode::Symbolic, Orientation::Reversed).unwrap();
        let r = check_pairings(&e).unwrap();
        let v = r.to_json(false);
        assert_eq!(v["millis"], 0);
        let back = CheckReport::from_json(&v).unwrap();
        assert_eq!(back.witness, r.witness);
        assert_eq!(back.passed, r.passed);
        assert_eq!(back.to_json(false), v);
    }

    #[test]
    fn c2_lift_round_trips() {
        let (r, pattern) = check_c2_relations(2, 1, crate::DEFAULT_BUDGET).unwrap();
        assert!(r.passed, "{:?}", r.notes);
        assert_eq!(pattern.n_minus_k, Some(-1));
        let p = C2Poly::e_bar(2, -1).mul(&C2Poly::var(2, Basis::Q));
        assert_eq!(c2_reduce(&p.lift()).unwrap(), p);
    }

    #[test]
    fn levels_select_checks() {
        assert!(applicable_checks(&KMode::at_int(0)).contains(&"molev"));
        assert!(!applicable_checks(&KMode::at_int(0)).contains(&"omega"));
        assert!(applicable_checks(&KMode::Symbolic).contains(&"omega"));
        assert!(!applicable_checks(&KMode::at_int(1)).contains(&"omega"));
    }
}
