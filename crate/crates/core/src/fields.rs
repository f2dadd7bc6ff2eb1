//! Mode actions on Fock states and the general `n`-th product.
//!
//! [`Engine`] fixes the rank `N`, the treatment of `K` and the Gram form, and
//! owns the memo table for monomial products.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fock::{
    declared_order, Basis, Charge, FockMonomial, FockState, GramForm, KMode, Mode, Orientation,
    WeightVector,
};
use crate::scalar::{binomial, ScalarQ};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Linear operator on states.
#[derive(Clone, Debug)]
pub enum OperatorExpr {
    /// `a_{(n)}` for `a ∈ V`.
    Heisenberg(WeightVector, i64),
    /// The translation operator `∂`.
    Translation,
    /// `e^{∫b}_{(n)}`.
    Lattice(Charge, i64),
    Scale(ScalarQ, Box<OperatorExpr>),
    Sum(Vec<OperatorExpr>),
    /// `Compose([X, Y, Z]) = X ∘ Y ∘ Z`; the empty composition is the identity.
    Compose(Vec<OperatorExpr>),
}

impl OperatorExpr {
    pub fn identity() -> Self {
        OperatorExpr::Compose(Vec::new())
    }

    pub fn scaled(self, c: ScalarQ) -> Self {
        OperatorExpr::Scale(c, Box::new(self))
    }

    pub fn then_apply(self, inner: OperatorExpr) -> Self {
        OperatorExpr::Compose(vec![self, inner])
    }
}

/// `{n ≥ 0 : a_{(n)} b}`; empty means the OPE is regular.
pub type SingularPart = BTreeMap<u32, FockState>;

/// Sign of the bimultiplicative cocycle on a pair of basis symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleEntry {
    pub left: Basis,
    pub right: Basis,
    pub sign: i8,
}

struct Ticker {
    used: u64,
    budget: u64,
}

impl Ticker {
    fn tick(&mut self, k: u64) -> Result<()> {
        self.used += k;
        if self.used > self.budget {
            Err(Error::BudgetExhausted {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }
}

type MemoKey = (FockMonomial, i64, FockMonomial);

pub struct Engine {
    n: usize,
    k: KMode,
    gram: GramForm,
    budget: u64,
    cocycle: Vec<CocycleEntry>,
    memo: Mutex<HashMap<MemoKey, FockState>>,
}

impl Engine {
    pub fn new(n: usize, k: KMode) -> Result<Self> {
        Self::with_orientation(n, k, Orientation::Declared)
    }

    pub fn with_orientation(n: usize, k: KMode, orientation: Orientation) -> Result<Self> {
        let gram = GramForm::with_orientation(n, &k, orientation)?;
        let cocycle = cocycle_table(n, orientation)?;
        Ok(Engine {
            n,
            k,
            gram,
            budget: DEFAULT_BUDGET,
            cocycle,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn k_mode(&self) -> &KMode {
        &self.k
    }

    pub fn gram(&self) -> &GramForm {
        &self.gram
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Specialises a `Q(K)` value to the engine's level.
    pub fn scalar(&self, s: &ScalarQ) -> Result<ScalarQ> {
        self.k.specialize(s)
    }

    pub fn vacuum(&self) -> FockState {
        FockState::vacuum(self.n)
    }

    pub fn basis_vector(&self, b: Basis) -> WeightVector {
        WeightVector::basis(self.n, b)
    }

    pub fn cocycle_table(&self) -> &[CocycleEntry] {
        &self.cocycle
    }

    /// `ε(b, w) = Π_{i>j} ε(e_i, e_j)^{b_i w_j}` over the declared basis order.
    pub fn cocycle(&self, b: &Charge, w: &Charge) -> Result<i64> {
        let n = self.n;
        let mut exponent = Rational64::zero();
        for e in &self.cocycle {
            if e.sign < 0 {
                exponent += b.coord(e.left) * w.coord(e.right);
            }
        }
        if !exponent.is_integer() {
            return Err(Error::NonLocal {
                shift: b.to_string(),
                charge: w.to_string(),
                pairing: format!("cocycle exponent {exponent} (N = {n})"),
            });
        }
        Ok(if exponent.to_integer() % 2 == 0 {
            1
        } else {
            -1
        })
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    // ---------------------------------------------------------------------
    // Heisenberg modes and translation
    // ---------------------------------------------------------------------

    /// `a_{(n)} v`.
    pub fn apply_heisenberg_mode(&self, a: &WeightVector, n: i64, v: &FockState) -> FockState {
        let mut out = FockState::zero();
        for (m, c) in v.terms() {
            self.heisenberg_on_monomial(a, n, m, c, &mut out);
        }
        out
    }

    fn heisenberg_on_monomial(
        &self,
        a: &WeightVector,
        n: i64,
        m: &FockMonomial,
        c: &ScalarQ,
        out: &mut FockState,
    ) {
        match n.cmp(&0) {
            std::cmp::Ordering::Less => {
                let depth = (-n) as u32;
                for (t, at) in a.support() {
                    out.add_term(
                        m.with_mode(Mode {
                            sym: t as u16,
                            depth,
                        }),
                        c * at,
                    );
                }
            }
            std::cmp::Ordering::Equal => {
                let p = self.gram.pairing(a, &m.charge.to_weight()).expect("rank");
                out.add_term(m.clone(), c * &p);
            }
            std::cmp::Ordering::Greater => {
                let depth = n as u32;
                let nn = ScalarQ::from_int(n);
                for (pos, md) in m.modes.iter().enumerate() {
                    if md.depth != depth {
                        continue;
                    }
                    let p = self.gram.pairing_with_basis(a, md.sym as usize);
                    if p.is_zero() {
                        continue;
                    }
                    out.add_term(m.without_mode_at(pos), &(c * &p) * &nn);
                }
            }
        }
    }

    /// `s_{(n)} v` for a basis symbol with index `t`.
    fn basis_mode(&self, t: usize, n: i64, v: &FockState) -> FockState {
        let a = WeightVector::basis(self.n, Basis::from_index(t, self.n));
        self.apply_heisenberg_mode(&a, n, v)
    }

    /// The translation operator: `T e^{∫w} = w_{(-1)} e^{∫w}` and
    /// `[T, a_{(-n)}] = n a_{(-n-1)}`.
    pub fn translate(&self, v: &FockState) -> FockState {
        let mut out = FockState::zero();
        for (m, c) in v.terms() {
            for (pos, md) in m.modes.iter().enumerate() {
                let bumped = m.without_mode_at(pos).with_mode(Mode {
                    sym: md.sym,
                    depth: md.depth + 1,
                });
                out.add_term(bumped, c * &ScalarQ::from_int(md.depth as i64));
            }
            for (t, wt) in m.charge.coords().iter().enumerate() {
                if wt.is_zero() {
                    continue;
                }
                let coeff = c * &ScalarQ::from_ratio(*wt.numer(), *wt.denom());
                out.add_term(
                    m.with_mode(Mode {
                        sym: t as u16,
                        depth: 1,
                    }),
                    coeff,
                );
            }
        }
        out
    }

    pub fn translate_pow(&self, v: &FockState, times: usize) -> FockState {
        (0..times).fold(v.clone(), |acc, _| self.translate(&acc))
    }

    // ---------------------------------------------------------------------
    // Lattice vertex operators
    // ---------------------------------------------------------------------

    /// `e^{∫b}_{(n)} v`: coefficient of `z^{-n-1}` in
    /// `ε(b,w) e^{b} z^{(b,w)} exp(Σ_{k>0} b_{(-k)} z^k/k) exp(-Σ_{k>0} b_{(k)} z^{-k}/k)`.
    pub fn lattice_mode(&self, b: &Charge, n: i64, v: &FockState) -> Result<FockState> {
        let mut t = Ticker {
            used: 0,
            budget: self.budget,
        };
        self.lattice_mode_t(b, n, v, &mut t)
    }

    fn lattice_mode_t(
        &self,
        b: &Charge,
        n: i64,
        v: &FockState,
        t: &mut Ticker,
    ) -> Result<FockState> {
        let mut out = FockState::zero();
        let bw = b.to_weight();
        for (m, c) in v.terms() {
            t.tick(1)?;
            let s = self.gram.integer_pairing(b, &m.charge)?;
            let depth = m.depth() as i64;
            // Only q with p = q - n - 1 - s >= 0 and q <= depth contribute.
            let q_min = (n + 1 + s).max(0);
            if q_min > depth {
                continue;
            }
            let eps = self.cocycle(b, &m.charge)?;
            let single = FockState::monomial(m.clone(), c.clone());
            let mut annih = vec![single];
            for q in 1..=depth {
                let mut acc = FockState::zero();
                for k in 1..=q {
                    let prev = &annih[(q - k) as usize];
                    if prev.is_zero() {
                        continue;
                    }
                    acc.add_assign(&self.apply_heisenberg_mode(&bw, k, prev));
                }
                t.tick(acc.len() as u64)?;
                annih.push(acc.scale(&ScalarQ::from_ratio(-1, q)));
            }
            let shifted = m.charge.add(b);
            for q in q_min..=depth {
                let p = q - n - 1 - s;
                let created = self.creation_series(&bw, p as usize, &annih[q as usize], t)?;
                for (mm, cc) in created.terms() {
                    let coeff = if eps < 0 { -cc } else { cc.clone() };
                    out.add_term(mm.with_charge(shifted.clone()), coeff);
                }
            }
        }
        Ok(out)
    }

    /// Coefficient of `z^p` in `exp(Σ_{k>0} b_{(-k)} z^k / k)` applied to `x`.
    fn creation_series(
        &self,
        b: &WeightVector,
        p: usize,
        x: &FockState,
        t: &mut Ticker,
    ) -> Result<FockState> {
        if p == 0 || x.is_zero() {
            return Ok(x.clone());
        }
        let mut c = vec![x.clone()];
        for r in 1..=p {
            let mut acc = FockState::zero();
            for k in 1..=r {
                acc.add_assign(&self.apply_heisenberg_mode(b, -(k as i64), &c[r - k]));
            }
            t.tick(acc.len() as u64)?;
            c.push(acc.scale(&ScalarQ::from_ratio(1, r as i64)));
        }
        Ok(c.pop().unwrap())
    }

    // ---------------------------------------------------------------------
    // n-th products
    // ---------------------------------------------------------------------

    /// `a_{(n)} b` for arbitrary free-field states.
    pub fn nth_product(&self, a: &FockState, n: i64, b: &FockState) -> Result<FockState> {
        let mut t = Ticker {
            used: 0,
            budget: self.budget,
        };
        self.product_states(a, n, b, &mut t)
    }

    fn product_states(
        &self,
        a: &FockState,
        n: i64,
        b: &FockState,
        t: &mut Ticker,
    ) -> Result<FockState> {
        let mut out = FockState::zero();
        for (am, ac) in a.terms() {
            let partial = self.product_mono_state(am, n, b, t)?;
            out.add_scaled(&partial, ac);
        }
        Ok(out)
    }

    fn product_mono_state(
        &self,
        a: &FockMonomial,
        n: i64,
        b: &FockState,
        t: &mut Ticker,
    ) -> Result<FockState> {
        let mut out = FockState::zero();
        for (bm, bc) in b.terms() {
            let partial = self.product_mono(a, n, bm, t)?;
            out.add_scaled(&partial, bc);
        }
        Ok(out)
    }

    /// Largest `n` for which `a_{(n)} b` can be nonzero.
    fn locality_bound(&self, a: &FockMonomial, b: &FockMonomial) -> Result<i64> {
        let s = if a.charge.is_zero() {
            0
        } else {
            self.gram.integer_pairing(&a.charge, &b.charge)?
        };
        Ok(a.depth() as i64 + b.depth() as i64 - 1 - s)
    }

    fn product_mono(
        &self,
        a: &FockMonomial,
        n: i64,
        b: &FockMonomial,
        t: &mut Ticker,
    ) -> Result<FockState> {
        t.tick(1)?;
        if a.modes.is_empty() && a.charge.is_zero() {
            return Ok(if n == -1 {
                FockState::monomial(b.clone(), ScalarQ::one())
            } else {
                FockState::zero()
            });
        }
        if n > self.locality_bound(a, b)? {
            return Ok(FockState::zero());
        }
        let key = (a.clone(), n, b.clone());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let result = if a.modes.is_empty() {
            self.lattice_mode_t(
                &a.charge,
                n,
                &FockState::monomial(b.clone(), ScalarQ::one()),
                t,
            )?
        } else {
            self.iterate(a, n, b, t)?
        };
        self.memo.lock().unwrap().insert(key, result.clone());
        Ok(result)
    }

    /// `(x_{(-1)} a')_{(n)} b` with `x = u_{(-d)}|0>`, whose field is
    /// `∂^{d-1}u(z)/(d-1)!`, so `x_{(i)} = C(d-2-i, d-1) u_{(i-d+1)}`.
    fn iterate(
        &self,
        a: &FockMonomial,
        n: i64,
        b: &FockMonomial,
        t: &mut Ticker,
    ) -> Result<FockState> {
        let first = a.modes[0];
        let rest = a.without_mode_at(0);
        let sym = first.sym as usize;
        let k = first.depth as i64 - 1;
        let single_b = FockState::monomial(b.clone(), ScalarQ::one());
        let mut out = FockState::zero();

        // Σ_{j≥0} x_{(-1-j)} (a'_{(n+j)} b)
        let bound = self.locality_bound(&rest, b)?;
        let mut j = 0i64;
        while n + j <= bound {
            let inner = self.product_mono(&rest, n + j, b, t)?;
            if !inner.is_zero() {
                let coeff = ScalarQ::from_bigint(binomial(k + j, k));
                let created = self.basis_mode(sym, -1 - j - k, &inner);
                out.add_scaled(&created, &coeff);
            }
            j += 1;
        }

        // Σ_{p≥0} x_{(p+k)} applied first: C(-p-1, k) u_{(p)} b, then a'_{(n-1-p-k)}.
        let max_p = b.max_depth() as i64;
        for p in 0..=max_p {
            let coeff = binomial(-p - 1, k);
            if coeff.is_zero() {
                continue;
            }
            let annihilated = self.basis_mode(sym, p, &single_b);
            if annihilated.is_zero() {
                continue;
            }
            let inner = self.product_mono_state(&rest, n - 1 - p - k, &annihilated, t)?;
            out.add_scaled(&inner, &ScalarQ::from_bigint(coeff));
        }
        Ok(out)
    }

    /// `{n ≥ 0 : a_{(n)} b ≠ 0}`.
    pub fn singular_part(&self, a: &FockState, b: &FockState) -> Result<SingularPart> {
        let mut bound = -1i64;
        for (am, _) in a.terms() {
            for (bm, _) in b.terms() {
                if am.modes.is_empty() && am.charge.is_zero() {
                    continue;
                }
                bound = bound.max(self.locality_bound(am, bm)?);
            }
        }
        let mut out = SingularPart::new();
        for n in 0..=bound {
            let p = self.nth_product(a, n, b)?;
            if !p.is_zero() {
                out.insert(n as u32, p);
            }
        }
        Ok(out)
    }

    // ---------------------------------------------------------------------
    // Operator trees
    // ---------------------------------------------------------------------

    pub fn apply_operator(&self, op: &OperatorExpr, v: &FockState) -> Result<FockState> {
        match op {
            OperatorExpr::Heisenberg(a, n) => Ok(self.apply_heisenberg_mode(a, *n, v)),
            OperatorExpr::Translation => Ok(self.translate(v)),
            OperatorExpr::Lattice(b, n) => self.lattice_mode(b, *n, v),
            OperatorExpr::Scale(c, inner) => Ok(self.apply_operator(inner, v)?.scale(c)),
            OperatorExpr::Sum(ops) => {
                let mut out = FockState::zero();
                for o in ops {
                    out.add_assign(&self.apply_operator(o, v)?);
                }
                Ok(out)
            }
            OperatorExpr::Compose(ops) => {
                let mut cur = v.clone();
                for o in ops.iter().rev() {
                    cur = self.apply_operator(o, &cur)?;
                }
                Ok(cur)
            }
        }
    }

    /// Specialises every coefficient of a symbolic state to this engine's level.
    pub fn specialize_state(&self, v: &FockState) -> Result<FockState> {
        v.map_coeffs(|c| self.k.specialize(c))
    }

    /// `u_{(-1)}` for a basis symbol, as an operator.
    pub fn creation(&self, b: Basis) -> OperatorExpr {
        OperatorExpr::Heisenberg(self.basis_vector(b), -1)
    }

    /// Rational `K` value if the engine is specialised.
    pub fn k_value(&self) -> Option<&BigRational> {
        match &self.k {
            KMode::At(k) => Some(k),
            KMode::Symbolic => None,
        }
    }

    /// Integer rank as i64, convenient for coefficient formulas.
    pub fn n_i64(&self) -> i64 {
        self.n.to_i64().unwrap()
    }
}

/// Cocycle signs on ordered basis pairs `(e_i, e_j)` with `i` after `j` in
/// the declared order: `ε = (-1)^{(e_i,e_j) + (e_i,e_i)(e_j,e_j)}` using the
/// form at `K = 0`; pairs with `i` not after `j` have `ε = 1`.
fn cocycle_table(n: usize, orientation: Orientation) -> Result<Vec<CocycleEntry>> {
    let g0 = GramForm::with_orientation(n, &KMode::at_int(0), orientation)?;
    let order = declared_order(n);
    let val = |a: Basis, b: Basis| -> BigInt {
        g0.entry(a, b)
            .as_rational()
            .map(|r| r.to_integer())
            .unwrap_or_default()
    };
    let mut out = Vec::new();
    for (i, &bi) in order.iter().enumerate() {
        for &bj in order.iter().take(i) {
            let e = val(bi, bj) + val(bi, bi) * val(bj, bj);
            let sign = if (e % 2i32).is_zero() { 1 } else { -1 };
            out.push(CocycleEntry {
                left: bi,
                right: bj,
                sign,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eng(n: usize) -> Engine {
        Engine::new(n, KMode::Symbolic).unwrap()
    }

    fn hw(n: usize, b: Basis, m: i64) -> FockState {
        FockState::highest_weight(Charge::basis_multiple(n, b, m))
    }

    #[test]
    fn heisenberg_pairing_examples() {
        let n = 3;
        let e = eng(n);
        let y = e.basis_vector(Basis::Y);
        let y_state = e.apply_heisenberg_mode(&y, -1, &e.vacuum());
        assert!(e.apply_heisenberg_mode(&y, 1, &y_state).is_zero());

        let q = e.basis_vector(Basis::Q);
        let ey = hw(n, Basis::Y, 1);
        assert_eq!(e.apply_heisenberg_mode(&q, 0, &ey), ey);

        let a1 = e.basis_vector(Basis::A(1));
        let a_state = e.apply_heisenberg_mode(&a1, -1, &e.vacuum());
        let back = e.apply_heisenberg_mode(&a1, 1, &a_state);
        assert_eq!(back, e.vacuum().scale(&ScalarQ::linear(2, 0)));
    }

    #[test]
    fn translation_examples() {
        let n = 2;
        let e = eng(n);
        assert!(e.translate(&e.vacuum()).is_zero());
        let y = e.basis_vector(Basis::Y);
        for m in [-2, -1, 1, 3] {
            let v = hw(n, Basis::Y, m);
            let expected = e
                .apply_heisenberg_mode(&y, -1, &v)
                .scale(&ScalarQ::from_int(m));
            assert_eq!(e.translate(&v), expected);
        }
        let a1 = e.basis_vector(Basis::A(1));
        let v = e.apply_heisenberg_mode(&a1, -1, &e.vacuum());
        assert_eq!(
            e.translate(&v),
            e.apply_heisenberg_mode(&a1, -2, &e.vacuum())
        );
    }

    #[test]
    fn lattice_mode_on_vacuum() {
        let n = 2;
        let e = eng(n);
        let q = Charge::basis(n, Basis::Q);
        let vac = e.vacuum();
        assert!(e.lattice_mode(&q, 0, &vac).unwrap().is_zero());
        assert_eq!(
            e.lattice_mode(&q, -1, &vac).unwrap(),
            FockState::highest_weight(q.clone())
        );
        let eq = FockState::highest_weight(q.clone());
        let expected = e.apply_heisenberg_mode(&e.basis_vector(Basis::Q), -1, &eq);
        assert_eq!(e.lattice_mode(&q, -2, &vac).unwrap(), expected);
    }

    #[test]
    fn screening_q_on_y_sectors() {
        let n = 3;
        let e = eng(n);
        let q = Charge::basis(n, Basis::Q);
        for m in 1..=3 {
            let v = hw(n, Basis::Y, m);
            for k in -m..=2 {
                assert!(e.lattice_mode(&q, k, &v).unwrap().is_zero(), "m={m} n={k}");
            }
            let top = e.lattice_mode(&q, -m - 1, &v).unwrap();
            let target = Charge::basis_multiple(n, Basis::Y, m).add(&q);
            let eps = e
                .cocycle(&q, &Charge::basis_multiple(n, Basis::Y, m))
                .unwrap();
            assert_eq!(
                top,
                FockState::highest_weight(target).scale(&ScalarQ::from_int(eps))
            );
        }
    }

    #[test]
    fn non_local_sector_rejected() {
        let n = 3;
        let e = eng(n);
        let a1 = Charge::basis(n, Basis::A(1));
        let v = FockState::highest_weight(a1.clone());
        let err = e.lattice_mode(&a1, 0, &v).unwrap_err();
        assert!(matches!(err, Error::NonLocal { .. }), "{err}");
    }

    #[test]
    fn vacuum_axioms() {
        let n = 3;
        let e = eng(n);
        let y = e.basis_vector(Basis::Y);
        let a2 = e.basis_vector(Basis::A(2));
        let x = e.apply_heisenberg_mode(
            &y,
            -2,
            &e.apply_heisenberg_mode(&a2, -1, &hw(n, Basis::Y, -1)),
        );
        for k in 0..4 {
            assert!(e.nth_product(&x, k, &e.vacuum()).unwrap().is_zero());
        }
        assert_eq!(e.nth_product(&x, -1, &e.vacuum()).unwrap(), x);
        assert_eq!(e.nth_product(&e.vacuum(), -1, &x).unwrap(), x);
        // x_{(-2)}|0> = T x
        assert_eq!(e.nth_product(&x, -2, &e.vacuum()).unwrap(), e.translate(&x));
    }

    #[test]
    fn heisenberg_ope() {
        let n = 2;
        let e = eng(n);
        let q = FockState::from_weight(&e.basis_vector(Basis::Q));
        let y = FockState::from_weight(&e.basis_vector(Basis::Y));
        assert_eq!(e.nth_product(&q, 1, &y).unwrap(), e.vacuum());
        assert!(e.nth_product(&q, 0, &y).unwrap().is_zero());
        assert!(e.nth_product(&y, 1, &y).unwrap().is_zero());
    }

    #[test]
    fn exponentials_of_y_are_mutually_regular() {
        let n = 3;
        let e = eng(n);
        for (a, b) in [(1, 1), (1, -1), (-1, 2)] {
            let sp = e
                .singular_part(&hw(n, Basis::Y, a), &hw(n, Basis::Y, b))
                .unwrap();
            assert!(sp.is_empty(), "{a} {b}");
        }
    }

    #[test]
    fn translation_covariance_on_small_states() {
        let n = 2;
        let e = eng(n);
        let q = e.basis_vector(Basis::Q);
        let a1 = e.basis_vector(Basis::A(1));
        let a = e.apply_heisenberg_mode(&q, -1, &hw(n, Basis::Y, 1));
        let b = e.apply_heisenberg_mode(&a1, -2, &hw(n, Basis::Y, -1));
        let ta = e.translate(&a);
        for k in -2..4 {
            let lhs = e.nth_product(&ta, k, &b).unwrap();
            let rhs = e
                .nth_product(&a, k - 1, &b)
                .unwrap()
                .scale(&ScalarQ::from_int(-k));
            assert_eq!(lhs, rhs, "n = {k}");
        }
    }

    #[test]
    fn operator_composition_order() {
        let n = 2;
        let e = eng(n);
        let y = e.basis_vector(Basis::Y);
        // T ∘ Y_{(-1)} on |0> = Y_{(-2)}|0>, while Y_{(-1)} ∘ T on |0> = 0
        let op1 = OperatorExpr::Translation.then_apply(OperatorExpr::Heisenberg(y.clone(), -1));
        let op2 = OperatorExpr::Heisenberg(y.clone(), -1).then_apply(OperatorExpr::Translation);
        assert_eq!(
            e.apply_operator(&op1, &e.vacuum()).unwrap(),
            e.apply_heisenberg_mode(&y, -2, &e.vacuum())
        );
        assert!(e.apply_operator(&op2, &e.vacuum()).unwrap().is_zero());
        assert_eq!(
            e.apply_operator(&OperatorExpr::identity(), &e.vacuum())
                .unwrap(),
            e.vacuum()
        );
    }

    #[test]
    fn cocycle_only_couples_y_and_q() {
        let e = eng(4);
        let minus: Vec<_> = e.cocycle_table().iter().filter(|c| c.sign < 0).collect();
        assert_eq!(minus.len(), 1);
        assert_eq!((minus[0].left, minus[0].right), (Basis::Y, Basis::Q));
    }

    #[test]
    fn budget_exhaustion_reported() {
        let n = 3;
        let e = Engine::new(n, KMode::Symbolic).unwrap().with_budget(3);
        let q = e.basis_vector(Basis::Q);
        let mut a = hw(n, Basis::Y, 1);
        for d in 1..4 {
            a = e.apply_heisenberg_mode(&q, -d, &a);
        }
        let b = e.apply_heisenberg_mode(&q, -3, &hw(n, Basis::Y, -1));
        let err = e.nth_product(&a, 0, &b).unwrap_err();
        assert_eq!(err, Error::BudgetExhausted { budget: 3 });
    }
}
