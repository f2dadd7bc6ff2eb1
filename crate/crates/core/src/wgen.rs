//! Construction of the generators: `μ_i`, `H`, `E`, `F`, the operators `R_i`
//! and `F_i`, noncommutative elementary symmetric polynomials, `W'_m`,
//! `W''_m`, `W_m`, `U_m`, `ω` and the critical-level fermionic fields.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fields::{Engine, OperatorExpr};
use crate::fock::{mu_vector_symbolic, Basis, Charge, FockState, KMode, TermJson, WeightVector};
use crate::scalar::{binomial, ScalarJson, ScalarQ};

/// `ℓ_N(K) = K(N-1)/N - 1`.
pub fn ell(n: usize) -> ScalarQ {
    let nn = n as i64;
    &(&ScalarQ::k() * &ScalarQ::from_ratio(nn - 1, nn)) - &ScalarQ::one()
}

/// `Π_{j=1}^{k} (j(K-1)+1) / (j(K-1))`.
pub fn pi_coeff(k: usize) -> ScalarQ {
    let mut acc = ScalarQ::one();
    for j in 1..=k as i64 {
        let num = ScalarQ::linear(j, 1 - j);
        let den = ScalarQ::linear(j, -j);
        acc = &acc * &num.checked_div(&den).expect("nonzero");
    }
    acc
}

/// `Π_{j=1}^{N-m} j(K-1) / (j(K-1) - K)`, the normalisation from `W'_m` to `W''_m`
/// up to the sign `(-1)^m`.
pub fn w_double_prefactor(n: usize, m: usize) -> ScalarQ {
    let mut acc = ScalarQ::one();
    for j in 1..=(n - m) as i64 {
        let num = ScalarQ::linear(j, -j);
        let den = ScalarQ::linear(j - 1, -j);
        acc = &acc * &num.checked_div(&den).expect("nonzero");
    }
    acc
}

/// `μ_i` at the engine's level.
pub fn mu_vector(e: &Engine, i: usize) -> Result<WeightVector> {
    mu_vector_symbolic(i, e.rank())?.map_coords(|c| e.scalar(c))
}

/// `H = ℓ_N Y + Q + Σ_j (N-j)/N A_j` at the engine's level.
pub fn h_vector(e: &Engine) -> Result<WeightVector> {
    let n = e.rank();
    let nn = n as i64;
    let mut v = WeightVector::zero(n)
        .with(Basis::Y, e.scalar(&ell(n))?)
        .with(Basis::Q, ScalarQ::one());
    for j in 1..n {
        v = v.with(Basis::A(j), ScalarQ::from_ratio(nn - j as i64, nn));
    }
    Ok(v)
}

fn k_minus_one(e: &Engine) -> Result<ScalarQ> {
    e.scalar(&ScalarQ::linear(1, -1))
}

/// `F_i = (K-1)∂ - μ_{i(-1)}` for `i = 0..=N`.
pub fn f_op(e: &Engine, i: usize) -> Result<OperatorExpr> {
    let mu = mu_vector(e, i)?;
    Ok(OperatorExpr::Sum(vec![
        OperatorExpr::Translation.scaled(k_minus_one(e)?),
        OperatorExpr::Heisenberg(mu, -1).scaled(-ScalarQ::one()),
    ]))
}

/// `R_i = (K-1)∂ + H_{(-1)} - μ_{i(-1)}` for `i ≥ 1`, and
/// `R_0 = (K-1)(∂ + Y_{(-1)})`.
pub fn r_op(e: &Engine, i: usize) -> Result<OperatorExpr> {
    if i == 0 {
        let y = e.basis_vector(Basis::Y);
        return Ok(OperatorExpr::Sum(vec![
            OperatorExpr::Translation,
            OperatorExpr::Heisenberg(y, -1),
        ])
        .scaled(k_minus_one(e)?));
    }
    let a = h_vector(e)?.sub(&mu_vector(e, i)?);
    Ok(OperatorExpr::Sum(vec![
        OperatorExpr::Translation.scaled(k_minus_one(e)?),
        OperatorExpr::Heisenberg(a, -1),
    ]))
}

/// `e_m(X_1, …, X_n) t`, the sum of products `X_{i_1} ⋯ X_{i_m} t` with
/// `i_1 > ⋯ > i_m`.
pub fn noncomm_esym(
    e: &Engine,
    m: usize,
    ops: &[OperatorExpr],
    target: &FockState,
) -> Result<FockState> {
    Ok(esym_table(e, m, ops, target)?.swap_remove(m))
}

/// `[e_0 t, e_1 t, …, e_{max_m} t]` for the full operator list.
///
/// Recurrence on the last operator:
/// `e_d(X_1..X_j) t = X_j e_{d-1}(X_1..X_{j-1}) t + e_d(X_1..X_{j-1}) t`.
pub fn esym_table(
    e: &Engine,
    max_m: usize,
    ops: &[OperatorExpr],
    target: &FockState,
) -> Result<Vec<FockState>> {
    let mut row = vec![FockState::zero(); max_m + 1];
    row[0] = target.clone();
    for (j, op) in ops.iter().enumerate() {
        for d in (1..=max_m.min(j + 1)).rev() {
            if row[d - 1].is_zero() {
                continue;
            }
            let applied = e.apply_operator(op, &row[d - 1])?;
            row[d].add_assign(&applied);
        }
    }
    Ok(row)
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, size, &mut Vec::new(), &mut out);
    out
}

/// `W'_0, W'_1, …, W'_N` straight from the defining sum over `k` and over
/// index sets `i_1 < ⋯ < i_{N-k}`, with `F_0` in positions `1..k`.
pub fn build_w_prime_all(e: &Engine) -> Result<Vec<FockState>> {
    let f: Vec<OperatorExpr> = (0..=e.rank()).map(|i| f_op(e, i)).collect::<Result<_>>()?;
    prime_family(e, &f)
}

/// `Σ_k (-1)^k Π_k Σ_{i_1<⋯<i_{N-k}} e_m(X_0, …, X_0, X_{i_1}, …, X_{i_{N-k}}) |0>`
/// for every `m`, given `X_0..X_N`.
pub fn prime_family(e: &Engine, x: &[OperatorExpr]) -> Result<Vec<FockState>> {
    let n = e.rank();
    let mut out = vec![FockState::zero(); n + 1];
    for k in 0..=n {
        let c = e.scalar(&pi_coeff(k))?;
        if c.is_zero() {
            continue;
        }
        let sign = if k % 2 == 0 { c } else { -c };
        for s in subsets(n, n - k) {
            let mut ops = vec![x[0].clone(); k];
            ops.extend(s.iter().map(|&i| x[i].clone()));
            let table = esym_table(e, n, &ops, &e.vacuum())?;
            for (m, st) in table.iter().enumerate() {
                out[m].add_scaled(st, &sign);
            }
        }
    }
    Ok(out)
}

/// `W'_m` for `1 ≤ m ≤ N`.
pub fn build_w_prime(e: &Engine, m: usize) -> Result<FockState> {
    check_m(e, m, 1)?;
    Ok(build_w_prime_all(e)?.swap_remove(m))
}

/// The scalar `c` with `W'_0 = c |0>`: `Σ_k (-1)^k C(N,k) Π_k`.
pub fn w_prime_zero_constant(e: &Engine) -> Result<ScalarQ> {
    let n = e.rank() as i64;
    let mut acc = ScalarQ::zero();
    for k in 0..=n {
        let t = &e.scalar(&pi_coeff(k as usize))? * &ScalarQ::from_bigint(binomial(n, k));
        acc = if k % 2 == 0 { acc + t } else { acc - t };
    }
    Ok(acc)
}

fn check_m(e: &Engine, m: usize, lo: usize) -> Result<()> {
    if m < lo || m > e.rank() {
        return Err(Error::IndexOutOfRange {
            index: m,
            range: format!("{lo}..={}", e.rank()),
        });
    }
    Ok(())
}

/// `Σ_{k=0}^{m} (-1)^{m+k} Π_k e_{m-k}(X_1..X_N) X_0^k |0>` for all `m` at once.
pub fn normalised_family(e: &Engine, x: &[OperatorExpr]) -> Result<Vec<FockState>> {
    let n = e.rank();
    let mut powers = vec![e.vacuum()];
    for k in 1..=n {
        let next = e.apply_operator(&x[0], &powers[k - 1])?;
        powers.push(next);
    }
    let mut out = vec![FockState::zero(); n + 1];
    for (k, p) in powers.iter().enumerate() {
        let c = e.scalar(&pi_coeff(k))?;
        if c.is_zero() || p.is_zero() {
            continue;
        }
        let table = esym_table(e, n - k, &x[1..], p)?;
        for (d, st) in table.iter().enumerate() {
            let m = d + k;
            let signed = if (m + k) % 2 == 0 { c.clone() } else { -&c };
            out[m].add_scaled(st, &signed);
        }
    }
    Ok(out)
}

/// `W''_0..W''_N` from `Σ_k (-1)^{m+k} Π_k e_{m-k}(F_1..F_N) F_0^k |0>`.
pub fn build_w_double_all(e: &Engine) -> Result<Vec<FockState>> {
    let n = e.rank();
    let f: Vec<OperatorExpr> = (0..=n).map(|i| f_op(e, i)).collect::<Result<_>>()?;
    normalised_family(e, &f)
}

/// `W''_m` as the rescaled `W'_m`: `(-1)^m Π_{j=1}^{N-m} j(K-1)/(j(K-1)-K) W'_m`.
pub fn w_double_from_prime(e: &Engine, m: usize, w_prime: &FockState) -> Result<FockState> {
    let c = e.scalar(&w_double_prefactor(e.rank(), m))?;
    let signed = if m % 2 == 0 { c } else { -c };
    Ok(w_prime.scale(&signed))
}

/// `W_0 = |0>, W_1, …, W_N` from the normalised `W''_m` by
/// `W_m = W''_m - Σ_{k=1}^{m} (-1)^k Π_k W_{m-k(-1)} H_{(-1)}^k |0>`.
pub fn build_w_all(e: &Engine) -> Result<Vec<FockState>> {
    let n = e.rank();
    let wdd = build_w_double_all(e)?;
    let h = OperatorExpr::Heisenberg(h_vector(e)?, -1);
    let mut h_pow = vec![e.vacuum()];
    for k in 1..=n {
        let next = e.apply_operator(&h, &h_pow[k - 1])?;
        h_pow.push(next);
    }
    let mut w: Vec<FockState> = vec![e.vacuum()];
    for m in 1..=n {
        let mut acc = wdd[m].clone();
        for k in 1..=m {
            let c = e.scalar(&pi_coeff(k))?;
            if c.is_zero() || w[m - k].is_zero() {
                continue;
            }
            let term = e.nth_product(&w[m - k], -1, &h_pow[k])?;
            let signed = if k % 2 == 0 { -c } else { c };
            acc.add_scaled(&term, &signed);
        }
        w.push(acc);
    }
    Ok(w)
}

pub fn build_w(e: &Engine, m: usize) -> Result<FockState> {
    check_m(e, m, 1)?;
    Ok(build_w_all(e)?.swap_remove(m))
}

/// `U_0..U_N` from `Σ_k (-1)^{m+k} Π_k e_{m-k}(R_1..R_N) R_0^k |0>`. At a level
/// where `Π_k` has a pole the family is built with symbolic `K` and then
/// specialised, which is legitimate because the result is polynomial in `K`.
pub fn build_u_all(e: &Engine) -> Result<Vec<FockState>> {
    let n = e.rank();
    let has_pole = (1..=n).any(|k| e.scalar(&pi_coeff(k)).is_err());
    if has_pole {
        let sym = Engine::with_orientation(n, KMode::Symbolic, e.gram().orientation())?
            .with_budget(e.budget());
        let states = build_u_all(&sym)?;
        return states.iter().map(|s| e.specialize_state(s)).collect();
    }
    let r: Vec<OperatorExpr> = (0..=n).map(|i| r_op(e, i)).collect::<Result<_>>()?;
    normalised_family(e, &r)
}

pub fn build_u(e: &Engine, m: usize) -> Result<FockState> {
    check_m(e, m, 1)?;
    Ok(build_u_all(e)?.swap_remove(m))
}

pub fn e_state(e: &Engine) -> FockState {
    FockState::highest_weight(Charge::basis(e.rank(), Basis::Y))
}

pub fn h_state(e: &Engine) -> Result<FockState> {
    Ok(FockState::from_weight(&h_vector(e)?))
}

/// `F = -R_N ⋯ R_1 e^{-∫Y}`.
pub fn f_state(e: &Engine) -> Result<FockState> {
    let n = e.rank();
    let mut v = FockState::highest_weight(Charge::basis_multiple(n, Basis::Y, -1));
    for i in 1..=n {
        v = e.apply_operator(&r_op(e, i)?, &v)?;
    }
    Ok(v.neg())
}

/// Conformal vector `ω = -W_2/K + ((2N-4)K - (2N-3))/(2(K-1)) ∂H`.
pub fn build_omega(e: &Engine, w2: &FockState) -> Result<FockState> {
    let n = e.rank() as i64;
    let c_w = e.scalar(&ScalarQ::from_int(-1).checked_div(&ScalarQ::k())?)?;
    let c_dh =
        e.scalar(&ScalarQ::linear(2 * n - 4, 3 - 2 * n).checked_div(&ScalarQ::linear(2, -2))?)?;
    let h = h_state(e)?;
    let mut out = w2.scale(&c_w);
    out.add_scaled(&e.translate(&h), &c_dh);
    Ok(out)
}

/// `-W_2/K + (N-1)/2 · (2K-1)/(K-1)^2 · H_{(-1)}H + N/2 · ((2N-3)K - (2N-2))/(K-1) · ∂H`;
/// kept for comparison with [`build_omega`].
pub fn build_omega_alternative(e: &Engine, w2: &FockState) -> Result<FockState> {
    let n = e.rank() as i64;
    let c_w = e.scalar(&ScalarQ::from_int(-1).checked_div(&ScalarQ::k())?)?;
    let km1 = ScalarQ::linear(1, -1);
    let c_hh = e.scalar(
        &(&ScalarQ::from_ratio(n - 1, 2) * &ScalarQ::linear(2, -1)).checked_div(&km1.pow(2))?,
    )?;
    let c_dh = e.scalar(
        &(&ScalarQ::from_ratio(n, 2) * &ScalarQ::linear(2 * n - 3, -(2 * n - 2)))
            .checked_div(&km1)?,
    )?;
    let h = h_state(e)?;
    let hh = e.apply_heisenberg_mode(&h_vector(e)?, -1, &h);
    let mut out = w2.scale(&c_w);
    out.add_scaled(&hh, &c_hh);
    out.add_scaled(&e.translate(&h), &c_dh);
    Ok(out)
}

/// Lattice data of the fermionic realization at `K = 0`.
#[derive(Clone, Debug)]
pub struct FermionicFields {
    /// `α = Q + Σ_j (N-j)/N A_j`.
    pub alpha: Charge,
    /// `β = Y - α`.
    pub beta: Charge,
    pub psi_plus: FockState,
    pub psi_minus: FockState,
    pub e_beta: FockState,
    pub e_minus_beta: FockState,
}

pub fn build_fermionic(e: &Engine) -> Result<FermionicFields> {
    if !e.k_mode().is_critical() {
        return Err(Error::NotCritical);
    }
    let n = e.rank();
    let nn = n as i64;
    let mut coords = vec![Rational64::zero(); n + 1];
    coords[Basis::Q.index(n)] = Rational64::one();
    for j in 1..n {
        coords[Basis::A(j).index(n)] = Rational64::new(nn - j as i64, nn);
    }
    let alpha = Charge::from_coords(coords);
    let beta = Charge::basis(n, Basis::Y).add(&alpha.neg());
    Ok(FermionicFields {
        psi_plus: FockState::highest_weight(alpha.clone()),
        psi_minus: FockState::highest_weight(alpha.neg()),
        e_beta: FockState::highest_weight(beta.clone()),
        e_minus_beta: FockState::highest_weight(beta.neg()),
        alpha,
        beta,
    })
}

/// Coefficients of `Σ_m W'_m u^{N-m}` in powers of `u`, recovered by evaluating
/// the product form `Σ_k (-1)^k Π_k Σ R̃_{i_1} ⋯ R̃_{i_{N-k}} R̃_0^k |0>`, with
/// `R̃_i = u + F_i`, at `u = 0..=N` and interpolating. Entry `j` is the
/// coefficient of `u^j`.
pub fn generating_function_coefficients(e: &Engine) -> Result<Vec<FockState>> {
    let n = e.rank();
    let f: Vec<OperatorExpr> = (0..=n).map(|i| f_op(e, i)).collect::<Result<_>>()?;
    let points: Vec<i64> = (0..=n as i64).collect();
    let mut values = Vec::new();
    for &u in &points {
        let shifted: Vec<OperatorExpr> = f
            .iter()
            .map(|op| {
                OperatorExpr::Sum(vec![
                    OperatorExpr::identity().scaled(ScalarQ::from_int(u)),
                    op.clone(),
                ])
            })
            .collect();
        let mut val = FockState::zero();
        for k in 0..=n {
            let c = e.scalar(&pi_coeff(k))?;
            if c.is_zero() {
                continue;
            }
            let signed = if k % 2 == 0 { c } else { -c };
            let mut base = e.vacuum();
            for _ in 0..k {
                base = e.apply_operator(&shifted[0], &base)?;
            }
            for s in subsets(n, n - k) {
                let mut v = base.clone();
                for &i in &s {
                    v = e.apply_operator(&shifted[i], &v)?;
                }
                val.add_scaled(&v, &signed);
            }
        }
        values.push(val);
    }
    let basis = lagrange_coefficients(&points);
    let mut coeffs = vec![FockState::zero(); n + 1];
    for (t, v) in values.iter().enumerate() {
        for (j, c) in basis[t].iter().enumerate() {
            if !c.is_zero() {
                coeffs[j].add_scaled(v, &ScalarQ::from_rational(c));
            }
        }
    }
    Ok(coeffs)
}

/// `basis[t][j]` = coefficient of `u^j` in the Lagrange polynomial that is 1 at
/// `points[t]` and 0 at the other points.
fn lagrange_coefficients(points: &[i64]) -> Vec<Vec<BigRational>> {
    let big = |x: i64| BigRational::from_integer(x.into());
    points
        .iter()
        .enumerate()
        .map(|(t, &xt)| {
            let mut poly = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for (s, &xs) in points.iter().enumerate() {
                if s == t {
                    continue;
                }
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * big(xs);
                }
                poly = next;
                denom *= big(xt - xs);
            }
            poly.into_iter().map(|c| c / &denom).collect()
        })
        .collect()
}

/// Families a generator set may contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `E`, `H`, `F`.
    Core,
    WPrime,
    WDouble,
    W,
    U,
    Omega,
    Fermionic,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "core" | "EHF" => Ok(Family::Core),
            "Wp" | "W'" | "wprime" => Ok(Family::WPrime),
            "Wpp" | "W''" | "wdouble" => Ok(Family::WDouble),
            "W" => Ok(Family::W),
            "U" => Ok(Family::U),
            "omega" => Ok(Family::Omega),
            "fermionic" => Ok(Family::Fermionic),
            _ => Err(Error::Parse(format!("unknown generator family {s:?}"))),
        }
    }

    /// Families built when none are requested: everything defined at the level.
    pub fn defaults(k: &KMode) -> BTreeSet<Family> {
        let mut s: BTreeSet<Family> = [
            Family::Core,
            Family::WPrime,
            Family::WDouble,
            Family::W,
            Family::U,
        ]
        .into_iter()
        .collect();
        let bad_omega = match k {
            KMode::Symbolic => false,
            KMode::At(v) => v.is_zero() || v.is_one(),
        };
        if !bad_omega {
            s.insert(Family::Omega);
        }
        if k.is_critical() {
            s.insert(Family::Fermionic);
        }
        s
    }
}

/// Named states of one rank and level.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub n: usize,
    pub k: KMode,
    pub elements: BTreeMap<String, FockState>,
    /// The scalar `c` with `W'_0 = c |0>`, when the `W'` family was built.
    pub w_prime_zero: Option<ScalarQ>,
}

impl GeneratorSet {
    pub fn build(e: &Engine, families: &BTreeSet<Family>) -> Result<GeneratorSet> {
        let n = e.rank();
        let mut elements = BTreeMap::new();
        let mut w_prime_zero = None;
        if families.contains(&Family::Core) {
            elements.insert("E".to_string(), e_state(e));
            elements.insert("H".to_string(), h_state(e)?);
            elements.insert("F".to_string(), f_state(e)?);
        }
        if families.contains(&Family::WPrime) {
            let wp = build_w_prime_all(e)?;
            for (m, s) in wp.into_iter().enumerate().skip(1) {
                elements.insert(format!("W'{m}"), s);
            }
            w_prime_zero = Some(w_prime_zero_constant(e)?);
        }
        if families.contains(&Family::WDouble) {
            for (m, s) in build_w_double_all(e)?.into_iter().enumerate().skip(1) {
                elements.insert(format!("W''{m}"), s);
            }
        }
        let mut w2 = None;
        if families.contains(&Family::W) || families.contains(&Family::Omega) {
            let w = build_w_all(e)?;
            w2 = Some(w[2].clone());
            if families.contains(&Family::W) {
                for (m, s) in w.into_iter().enumerate().skip(1) {
                    elements.insert(format!("W{m}"), s);
                }
            }
        }
        if families.contains(&Family::U) {
            for (m, s) in build_u_all(e)?.into_iter().enumerate().skip(1) {
                elements.insert(format!("U{m}"), s);
            }
        }
        if families.contains(&Family::Omega) {
            let w2 = w2.expect("built above");
            elements.insert("omega".to_string(), build_omega(e, &w2)?);
        }
        if families.contains(&Family::Fermionic) {
            let fm = build_fermionic(e)?;
            elements.insert(
                "alpha".to_string(),
                FockState::from_weight(&fm.alpha.to_weight()),
            );
            elements.insert(
                "beta".to_string(),
                FockState::from_weight(&fm.beta.to_weight()),
            );
            elements.insert("Psi+".to_string(), fm.psi_plus);
            elements.insert("Psi-".to_string(), fm.psi_minus);
            elements.insert("e^beta".to_string(), fm.e_beta);
            elements.insert("e^-beta".to_string(), fm.e_minus_beta);
        }
        debug_assert!(elements
            .values()
            .all(|s| s.charges().iter().all(|c| c.rank() == n)));
        Ok(GeneratorSet {
            n,
            k: e.k_mode().clone(),
            elements,
            w_prime_zero,
        })
    }

    pub fn get(&self, name: &str) -> Option<&FockState> {
        self.elements.get(name)
    }

    pub fn to_json(&self) -> Value {
        let mut elems = Map::new();
        for (name, s) in &self.elements {
            elems.insert(
                name.clone(),
                serde_json::to_value(s.to_json()).expect("serializable"),
            );
        }
        let mut v = json!({
            "n": self.n,
            "k": self.k.label(),
            "elements": Value::Object(elems),
        });
        if let Some(c) = &self.w_prime_zero {
            v["w_prime_zero"] = serde_json::to_value(c.to_json()).expect("serializable");
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<GeneratorSet> {
        let bad = |what: &str| Error::Parse(format!("generator set: {what}"));
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let k = parse_k(v["k"].as_str().ok_or_else(|| bad("missing k"))?)?;
        let mut elements = BTreeMap::new();
        for (name, terms) in v["elements"]
            .as_object()
            .ok_or_else(|| bad("missing elements"))?
        {
            let terms: Vec<TermJson> =
                serde_json::from_value(terms.clone()).map_err(|err| bad(&err.to_string()))?;
            elements.insert(name.clone(), FockState::from_json(n, &terms)?);
        }
        let w_prime_zero = match v.get("w_prime_zero") {
            Some(c) => {
                let j: ScalarJson =
                    serde_json::from_value(c.clone()).map_err(|err| bad(&err.to_string()))?;
                Some(ScalarQ::from_json(&j)?)
            }
            None => None,
        };
        Ok(GeneratorSet {
            n,
            k,
            elements,
            w_prime_zero,
        })
    }
}

/// Parses a level: `symbolic`, an integer or `p/q`. Decimal input is rejected.
pub fn parse_k(s: &str) -> Result<KMode> {
    let s = s.trim();
    if s == "symbolic" {
        return Ok(KMode::Symbolic);
    }
    let bad = || {
        Error::Parse(format!(
            "level must be \"symbolic\" or an exact rational p/q, got {s:?}"
        ))
    };
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: num_bigint::BigInt = p.parse().map_err(|_| bad())?;
    let q: num_bigint::BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(KMode::At(BigRational::new(p, q)))
}
