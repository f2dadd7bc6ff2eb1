//! The weight space `V` with its `K`-dependent Gram form, charges, and the
//! Fock-module states the engine manipulates.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ScalarJson, ScalarQ};

/// How the level parameter `K` is treated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum KMode {
    Symbolic,
    At(BigRational),
}

impl KMode {
    pub fn at_int(k: i64) -> Self {
        KMode::At(BigRational::from_integer(k.into()))
    }

    pub fn at_ratio(p: i64, q: i64) -> Self {
        KMode::At(BigRational::new(p.into(), q.into()))
    }

    pub fn is_critical(&self) -> bool {
        matches!(self, KMode::At(k) if k.is_zero())
    }

    /// Specialises a `Q(K)` value to this mode.
    pub fn specialize(&self, s: &ScalarQ) -> Result<ScalarQ> {
        match self {
            KMode::Symbolic => Ok(s.clone()),
            KMode::At(k0) => s.eval_at(k0).map(|r| ScalarQ::from_rational(&r)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            KMode::Symbolic => "symbolic".into(),
            KMode::At(k) => k.to_string(),
        }
    }
}

impl fmt::Display for KMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Basis symbols of `V`: `A_1..A_{N-1}`, `Q`, `Y`. Internally `A_i` has
/// index `i-1`, `Q` index `N-1` and `Y` index `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    A(usize),
    Q,
    Y,
}

impl Basis {
    pub fn index(self, n: usize) -> usize {
        match self {
            Basis::A(i) => {
                assert!(i >= 1 && i < n, "A_{i} out of range for N = {n}");
                i - 1
            }
            Basis::Q => n - 1,
            Basis::Y => n,
        }
    }

    pub fn from_index(idx: usize, n: usize) -> Basis {
        match idx {
            i if i + 1 < n => Basis::A(i + 1),
            i if i + 1 == n => Basis::Q,
            i if i == n => Basis::Y,
            _ => panic!("basis index {idx} out of range for N = {n}"),
        }
    }

    pub fn name(self) -> String {
        match self {
            Basis::A(i) => format!("A{i}"),
            Basis::Q => "Q".into(),
            Basis::Y => "Y".into(),
        }
    }

    pub fn parse(s: &str, n: usize) -> Result<Basis> {
        match s {
            "Q" => Ok(Basis::Q),
            "Y" => Ok(Basis::Y),
            _ => {
                let i: usize = s
                    .strip_prefix('A')
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown basis symbol {s:?}")))?;
                if i == 0 || i >= n {
                    return Err(Error::IndexOutOfRange {
                        index: i,
                        range: format!("1..={}", n - 1),
                    });
                }
                Ok(Basis::A(i))
            }
        }
    }
}

/// All basis symbols in the declared Gram-matrix order `A_{N-1},…,A_1,Q,Y`.
pub fn declared_order(n: usize) -> Vec<Basis> {
    let mut v: Vec<Basis> = (1..n).rev().map(Basis::A).collect();
    v.push(Basis::Q);
    v.push(Basis::Y);
    v
}

/// Element of `V ⊗ Q(K)`; coordinates may depend on `K` (e.g. `H`, `μ_i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    coords: Vec<ScalarQ>,
}

impl WeightVector {
    pub fn zero(n: usize) -> Self {
        WeightVector {
            coords: vec![ScalarQ::zero(); n + 1],
        }
    }

    pub fn basis(n: usize, b: Basis) -> Self {
        let mut v = Self::zero(n);
        v.coords[b.index(n)] = ScalarQ::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coord(&self, b: Basis) -> &ScalarQ {
        &self.coords[b.index(self.rank())]
    }

    pub fn coords(&self) -> &[ScalarQ] {
        &self.coords
    }

    pub fn with(mut self, b: Basis, c: ScalarQ) -> Self {
        let n = self.rank();
        self.coords[b.index(n)] = c;
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        WeightVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        WeightVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &ScalarQ) -> Self {
        WeightVector {
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(ScalarQ::is_zero)
    }

    pub fn map_coords(&self, f: impl Fn(&ScalarQ) -> Result<ScalarQ>) -> Result<Self> {
        Ok(WeightVector {
            coords: self.coords.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Nonzero coordinates with their basis index.
    pub fn support(&self) -> impl Iterator<Item = (usize, &ScalarQ)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// The same vector as a charge, if every coordinate is a rational constant.
    pub fn to_charge(&self) -> Option<Charge> {
        let coords = self
            .coords
            .iter()
            .map(|c| {
                let r = c.as_rational()?;
                let p: i64 = num_traits::ToPrimitive::to_i64(r.numer())?;
                let q: i64 = num_traits::ToPrimitive::to_i64(r.denom())?;
                Some(Rational64::new(p, q))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Charge { coords })
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.rank();
        let parts: Vec<String> = self
            .support()
            .map(|(i, c)| format!("({c})*{}", Basis::from_index(i, n).name()))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Label `w` of a Fock module `H_w`; rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Charge {
    coords: Vec<Rational64>,
}

impl Charge {
    pub fn zero(n: usize) -> Self {
        Charge {
            coords: vec![Rational64::zero(); n + 1],
        }
    }

    pub fn basis(n: usize, b: Basis) -> Self {
        Self::basis_multiple(n, b, 1)
    }

    pub fn basis_multiple(n: usize, b: Basis, m: i64) -> Self {
        let mut c = Self::zero(n);
        c.coords[b.index(n)] = Rational64::from_integer(m);
        c
    }

    pub fn from_coords(coords: Vec<Rational64>) -> Self {
        Charge { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Rational64] {
        &self.coords
    }

    pub fn coord(&self, b: Basis) -> Rational64 {
        self.coords[b.index(self.rank())]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Charge {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Charge {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn to_weight(&self) -> WeightVector {
        WeightVector {
            coords: self.coords.iter().map(rat64_to_scalar).collect(),
        }
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.rank();
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let name = Basis::from_index(i, n).name();
                if c.is_one() {
                    name
                } else {
                    format!("{c}{name}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

pub(crate) fn rat64_to_scalar(r: &Rational64) -> ScalarQ {
    ScalarQ::from_ratio(*r.numer(), *r.denom())
}

/// Orientation in which the tabulated Gram matrix is read. `Reversed` is the
/// deliberate misreading used as a negative control.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Declared,
    Reversed,
}

/// The symmetric bilinear form on `V`, already specialised to a [`KMode`].
#[derive(Clone, Debug)]
pub struct GramForm {
    n: usize,
    table: Vec<Vec<ScalarQ>>,
    nonzero: Vec<(usize, usize, ScalarQ)>,
    orientation: Orientation,
}

impl GramForm {
    pub fn new(n: usize, k: &KMode) -> Result<Self> {
        Self::with_orientation(n, k, Orientation::Declared)
    }

    pub fn with_orientation(n: usize, k: &KMode, orientation: Orientation) -> Result<Self> {
        assert!(n >= 2, "N must be at least 2");
        let dim = n + 1;
        // The tabulated matrix, rows/columns in the declared order A_{N-1},…,A_1,Q,Y.
        let kk = ScalarQ::k();
        let mut table0 = vec![vec![ScalarQ::zero(); dim]; dim];
        for r in 0..n - 1 {
            table0[r][r] = &kk * &ScalarQ::from_int(2);
            if r + 1 < dim {
                table0[r][r + 1] = -&kk;
                table0[r + 1][r] = -&kk;
            }
        }
        table0[n - 1][n - 1] = ScalarQ::one();
        table0[n - 1][n] = ScalarQ::one();
        table0[n][n - 1] = ScalarQ::one();
        let order = declared_order(n);
        let mut table = vec![vec![ScalarQ::zero(); dim]; dim];
        for r in 0..dim {
            for c in 0..dim {
                let (br, bc) = match orientation {
                    Orientation::Declared => (order[r], order[c]),
                    Orientation::Reversed => (order[dim - 1 - r], order[dim - 1 - c]),
                };
                table[br.index(n)][bc.index(n)] = k.specialize(&table0[r][c])?;
            }
        }
        let mut nonzero = Vec::new();
        for (s, row) in table.iter().enumerate() {
            for (t, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    nonzero.push((s, t, v.clone()));
                }
            }
        }
        Ok(GramForm {
            n,
            table,
            nonzero,
            orientation,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn entry(&self, a: Basis, b: Basis) -> &ScalarQ {
        &self.table[a.index(self.n)][b.index(self.n)]
    }

    pub fn entry_idx(&self, s: usize, t: usize) -> &ScalarQ {
        &self.table[s][t]
    }

    pub fn pairing(&self, a: &WeightVector, b: &WeightVector) -> Result<ScalarQ> {
        self.check_rank(a.rank())?;
        self.check_rank(b.rank())?;
        let mut acc = ScalarQ::zero();
        for (s, t, g) in &self.nonzero {
            let (x, y) = (&a.coords[*s], &b.coords[*t]);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            acc = acc + &(&(x * y) * g);
        }
        Ok(acc)
    }

    /// `(a, e_t)` for a basis index `t`.
    pub fn pairing_with_basis(&self, a: &WeightVector, t: usize) -> ScalarQ {
        let mut acc = ScalarQ::zero();
        for (s, c) in a.support() {
            let g = &self.table[s][t];
            if !g.is_zero() {
                acc = acc + &(c * g);
            }
        }
        acc
    }

    pub fn charge_pairing(&self, a: &Charge, b: &Charge) -> Result<ScalarQ> {
        self.check_rank(a.rank())?;
        self.check_rank(b.rank())?;
        let mut acc = ScalarQ::zero();
        for (s, t, g) in &self.nonzero {
            let (x, y) = (a.coords[*s], b.coords[*t]);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            acc = acc + &(&rat64_to_scalar(&(x * y)) * g);
        }
        Ok(acc)
    }

    /// `(a, b)` as an integer, or the non-local error when it is fractional or
    /// `K`-dependent.
    pub fn integer_pairing(&self, a: &Charge, b: &Charge) -> Result<i64> {
        let p = self.charge_pairing(a, b)?;
        p.as_integer().ok_or_else(|| Error::NonLocal {
            shift: a.to_string(),
            charge: b.to_string(),
            pairing: p.to_string(),
        })
    }

    fn check_rank(&self, r: usize) -> Result<()> {
        if r == self.n {
            Ok(())
        } else {
            Err(Error::RankMismatch(self.n, r))
        }
    }

    /// Conformal weight of `e^{∫w}`: `(w,w)/2 + (ρ,w)` where `(ρ,Y) = 1`,
    /// `(ρ,Q) = 1/2` and `(ρ,A_i) = 1 - K`, so that `Δ(e^{mY}) = m` and
    /// `Δ(e^{∫Q}) = Δ(e^{∫A_i}) = 1`.
    pub fn charge_weight(&self, w: &Charge, k: &KMode) -> ScalarQ {
        let n = self.n;
        let quad = &self.charge_pairing(w, w).expect("rank") * &ScalarQ::from_ratio(1, 2);
        let mut lin = rat64_to_scalar(&w.coord(Basis::Y))
            + rat64_to_scalar(&w.coord(Basis::Q)) * ScalarQ::from_ratio(1, 2);
        let one_minus_k = k.specialize(&ScalarQ::linear(-1, 1)).expect("polynomial");
        for i in 1..n {
            let c = w.coord(Basis::A(i));
            if !c.is_zero() {
                lin = lin + &(&rat64_to_scalar(&c) * &one_minus_k);
            }
        }
        quad + lin
    }
}

/// One creation mode `s_{(-depth)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub sym: u16,
    pub depth: u32,
}

/// `s_1(-n_1) … s_r(-n_r) e^{∫w}` with modes sorted by symbol then depth.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockMonomial {
    pub charge: Charge,
    pub modes: Vec<Mode>,
}

impl FockMonomial {
    pub fn new(charge: Charge, mut modes: Vec<Mode>) -> Self {
        modes.sort_unstable();
        FockMonomial { charge, modes }
    }

    pub fn highest_weight(charge: Charge) -> Self {
        FockMonomial {
            charge,
            modes: Vec::new(),
        }
    }

    /// Sum of mode depths.
    pub fn depth(&self) -> u64 {
        self.modes.iter().map(|m| m.depth as u64).sum()
    }

    pub fn max_depth(&self) -> u32 {
        self.modes.iter().map(|m| m.depth).max().unwrap_or(0)
    }

    pub fn with_mode(&self, m: Mode) -> Self {
        let mut modes = self.modes.clone();
        let pos = modes.partition_point(|x| *x < m);
        modes.insert(pos, m);
        FockMonomial {
            charge: self.charge.clone(),
            modes,
        }
    }

    pub fn without_mode_at(&self, pos: usize) -> Self {
        let mut modes = self.modes.clone();
        modes.remove(pos);
        FockMonomial {
            charge: self.charge.clone(),
            modes,
        }
    }

    pub fn with_charge(&self, charge: Charge) -> Self {
        FockMonomial {
            charge,
            modes: self.modes.clone(),
        }
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.charge.rank();
        for m in &self.modes {
            write!(
                f,
                "{}(-{}) ",
                Basis::from_index(m.sym as usize, n).name(),
                m.depth
            )?;
        }
        if self.charge.is_zero() {
            write!(f, "|0>")
        } else {
            write!(f, "e^{{{}}}", self.charge)
        }
    }
}

/// Finite linear combination of Fock monomials, possibly across several
/// charge sectors. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FockState {
    terms: BTreeMap<FockMonomial, ScalarQ>,
}

impl FockState {
    pub fn zero() -> Self {
        FockState::default()
    }

    pub fn vacuum(n: usize) -> Self {
        Self::monomial(
            FockMonomial::highest_weight(Charge::zero(n)),
            ScalarQ::one(),
        )
    }

    /// The highest-weight vector `e^{∫w}`.
    pub fn highest_weight(w: Charge) -> Self {
        Self::monomial(FockMonomial::highest_weight(w), ScalarQ::one())
    }

    pub fn monomial(m: FockMonomial, c: ScalarQ) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    /// `a_{(-1)}|0>` for a weight vector `a`.
    pub fn from_weight(a: &WeightVector) -> Self {
        let n = a.rank();
        let mut s = Self::zero();
        for (i, c) in a.support() {
            s.add_term(
                FockMonomial::new(
                    Charge::zero(n),
                    vec![Mode {
                        sym: i as u16,
                        depth: 1,
                    }],
                ),
                c.clone(),
            );
        }
        s
    }

    pub fn add_term(&mut self, m: FockMonomial, c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockState, c: &ScalarQ) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (m, v) in &other.terms {
            if unit {
                self.add_term(m.clone(), v.clone());
            } else {
                self.add_term(m.clone(), v * c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &FockState) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v.clone());
        }
    }

    pub fn add(&self, other: &FockState) -> FockState {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn sub(&self, other: &FockState) -> FockState {
        let mut s = self.clone();
        s.add_scaled(other, &ScalarQ::from_int(-1));
        s
    }

    pub fn scale(&self, c: &ScalarQ) -> FockState {
        if c.is_zero() {
            return Self::zero();
        }
        FockState {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> FockState {
        self.scale(&ScalarQ::from_int(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockMonomial, &ScalarQ)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &FockMonomial) -> ScalarQ {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&ScalarQ) -> Result<ScalarQ>) -> Result<FockState> {
        let mut out = FockState::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), f(v)?);
        }
        Ok(out)
    }

    /// Distinct charge sectors present in the state.
    pub fn charges(&self) -> Vec<Charge> {
        let mut v: Vec<Charge> = self.terms.keys().map(|m| m.charge.clone()).collect();
        v.dedup();
        v.sort();
        v.dedup();
        v
    }

    /// Projection to the sector of charge `w`.
    pub fn sector(&self, w: &Charge) -> FockState {
        FockState {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| &m.charge == w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Whether `self = c · other` for some scalar `c`; returns it.
    pub fn ratio_to(&self, other: &FockState) -> Option<ScalarQ> {
        if self.is_zero() && other.is_zero() {
            return Some(ScalarQ::one());
        }
        if self.len() != other.len() || other.is_zero() {
            return None;
        }
        let (m0, c0) = other.terms.iter().next()?;
        let r = self.terms.get(m0)?.checked_div(c0).ok()?;
        (other.scale(&r) == *self).then_some(r)
    }

    /// First term, used as a compact witness.
    pub fn leading_term(&self) -> Option<(FockMonomial, ScalarQ)> {
        self.terms
            .iter()
            .next()
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let n = m.charge.rank();
                let charge = m
                    .charge
                    .coords()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (Basis::from_index(i, n).name(), c.to_string()))
                    .collect();
                let modes = m
                    .modes
                    .iter()
                    .map(|md| {
                        (
                            Basis::from_index(md.sym as usize, n).name(),
                            -(md.depth as i64),
                        )
                    })
                    .collect();
                TermJson {
                    charge,
                    modes,
                    coeff: c.to_json(),
                }
            })
            .collect()
    }

    pub fn from_json(n: usize, terms: &[TermJson]) -> Result<FockState> {
        let mut s = FockState::zero();
        for t in terms {
            let mut coords = vec![Rational64::zero(); n + 1];
            for (sym, val) in &t.charge {
                let b = Basis::parse(sym, n)?;
                coords[b.index(n)] = parse_rational(val)?;
            }
            let modes = t
                .modes
                .iter()
                .map(|(sym, k)| {
                    let b = Basis::parse(sym, n)?;
                    if *k >= 0 {
                        return Err(Error::Parse(format!(
                            "mode index {k} is not a creation mode"
                        )));
                    }
                    Ok(Mode {
                        sym: b.index(n) as u16,
                        depth: (-k) as u32,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            s.add_term(
                FockMonomial::new(Charge::from_coords(coords), modes),
                ScalarQ::from_json(&t.coeff)?,
            );
        }
        Ok(s)
    }
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p.trim().parse().map_err(|_| bad())?, q))
        }
        None => Ok(Rational64::from_integer(
            s.trim().parse().map_err(|_| bad())?,
        )),
    }
}

/// One term of the JSON state encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub charge: BTreeMap<String, String>,
    pub modes: Vec<(String, i64)>,
    pub coeff: ScalarJson,
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c}) {m}")?;
            }
        }
        Ok(())
    }
}

/// Conformal weight of one monomial: total mode depth plus the charge weight.
pub fn monomial_weight(g: &GramForm, k: &KMode, m: &FockMonomial) -> ScalarQ {
    g.charge_weight(&m.charge, k) + ScalarQ::from_bigint(BigInt::from(m.depth()))
}

/// Decomposition of `v` into homogeneous components.
pub fn weight(g: &GramForm, k: &KMode, v: &FockState) -> BTreeMap<ScalarQ, FockState> {
    let mut out: BTreeMap<ScalarQ, FockState> = BTreeMap::new();
    for (m, c) in v.terms() {
        out.entry(monomial_weight(g, k, m))
            .or_default()
            .add_term(m.clone(), c.clone());
    }
    out
}

/// Result of checking the pairings that the screening-commutator computation
/// relies on.
#[derive(Clone, Debug)]
pub struct PairingReport {
    pub entries: Vec<PairingCheck>,
}

#[derive(Clone, Debug)]
pub struct PairingCheck {
    pub label: String,
    pub expected: ScalarQ,
    pub actual: ScalarQ,
}

impl PairingCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

impl PairingReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(PairingCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PairingCheck> {
        self.entries.iter().filter(|e| !e.passed())
    }
}

/// `μ_i` for `i = 0..=N` with symbolic `K`:
/// `μ_i = -(K/N) Y - Σ_{j<i} (j/N) A_j + Σ_{j≥i} ((N-j)/N) A_j` for `i ≥ 1`,
/// `μ_0 = -(K/N) Y + Q + Σ_j ((N-j)/N) A_j`.
pub fn mu_vector_symbolic(i: usize, n: usize) -> Result<WeightVector> {
    if i > n {
        return Err(Error::IndexOutOfRange {
            index: i,
            range: format!("0..={n}"),
        });
    }
    let nn = n as i64;
    let mut v = WeightVector::zero(n).with(Basis::Y, ScalarQ::k() * ScalarQ::from_ratio(-1, nn));
    if i == 0 {
        v = v.with(Basis::Q, ScalarQ::one());
        for j in 1..n {
            v = v.with(Basis::A(j), ScalarQ::from_ratio(nn - j as i64, nn));
        }
    } else {
        for j in 1..n {
            let c = if j < i {
                ScalarQ::from_ratio(-(j as i64), nn)
            } else {
                ScalarQ::from_ratio(nn - j as i64, nn)
            };
            v = v.with(Basis::A(j), c);
        }
    }
    Ok(v)
}

/// Checks `(A_i, μ_i) = K`, `(A_i, μ_{i+1}) = -K`, `(A_i, μ_j) = 0` otherwise,
/// `(Q, μ_0) = 1 - K`, `(Q, μ_1) = -K`, `(Q, μ_j) = 0` for `j ≥ 2`, and
/// `(μ_i, Y) = 0` for `i = 1..N`, all with symbolic `K`.
pub fn validate_pairings(n: usize, orientation: Orientation) -> Result<PairingReport> {
    let g = GramForm::with_orientation(n, &KMode::Symbolic, orientation)?;
    let mus: Vec<WeightVector> = (0..=n)
        .map(|i| mu_vector_symbolic(i, n))
        .collect::<Result<_>>()?;
    let kk = ScalarQ::k();
    let mut entries = Vec::new();
    let mut push =
        |label: String, expected: ScalarQ, a: &WeightVector, b: &WeightVector| -> Result<()> {
            let actual = g.pairing(a, b)?;
            entries.push(PairingCheck {
                label,
                expected,
                actual,
            });
            Ok(())
        };
    for i in 1..n {
        let a = WeightVector::basis(n, Basis::A(i));
        for (j, mu) in mus.iter().enumerate().skip(1) {
            let expected = if j == i {
                kk.clone()
            } else if j == i + 1 {
                -&kk
            } else {
                ScalarQ::zero()
            };
            push(format!("(A{i},mu{j})"), expected, &a, mu)?;
        }
    }
    let q = WeightVector::basis(n, Basis::Q);
    for (j, mu) in mus.iter().enumerate() {
        let expected = match j {
            0 => ScalarQ::linear(-1, 1),
            1 => -&kk,
            _ => ScalarQ::zero(),
        };
        push(format!("(Q,mu{j})"), expected, &q, mu)?;
    }
    let y = WeightVector::basis(n, Basis::Y);
    for (j, mu) in mus.iter().enumerate().skip(1) {
        push(format!("(mu{j},Y)"), ScalarQ::zero(), mu, &y)?;
    }
    Ok(PairingReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize) -> GramForm {
        GramForm::new(n, &KMode::Symbolic).unwrap()
    }

    #[test]
    fn gram_entries_match_declared_matrix() {
        let g = sym(4);
        let k = ScalarQ::k();
        assert_eq!(g.entry(Basis::Q, Basis::Q), &ScalarQ::one());
        assert_eq!(g.entry(Basis::Q, Basis::Y), &ScalarQ::one());
        assert_eq!(g.entry(Basis::Y, Basis::Y), &ScalarQ::zero());
        assert_eq!(g.entry(Basis::A(1), Basis::Q), &-&k);
        assert_eq!(g.entry(Basis::A(2), Basis::Q), &ScalarQ::zero());
        assert_eq!(
            g.entry(Basis::A(2), Basis::A(2)),
            &(&k * &ScalarQ::from_int(2))
        );
        assert_eq!(g.entry(Basis::A(2), Basis::A(3)), &-&k);
        assert_eq!(g.entry(Basis::A(1), Basis::A(3)), &ScalarQ::zero());
        assert_eq!(g.entry(Basis::A(3), Basis::Y), &ScalarQ::zero());
    }

    #[test]
    fn mu_pairs_with_a_to_k() {
        for n in 2..=5 {
            let g = sym(n);
            for i in 1..n {
                let a = WeightVector::basis(n, Basis::A(i));
                let mu = mu_vector_symbolic(i, n).unwrap();
                assert_eq!(g.pairing(&a, &mu).unwrap(), ScalarQ::k());
            }
        }
    }

    #[test]
    fn pairings_validate_in_declared_orientation() {
        for n in [2, 3, 4, 5] {
            let r = validate_pairings(n, Orientation::Declared).unwrap();
            assert!(
                r.all_pass(),
                "N={n}: {:?}",
                r.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn reversed_orientation_is_flagged() {
        let r = validate_pairings(2, Orientation::Reversed).unwrap();
        assert!(!r.all_pass());
        let q_mu1 = r.entries.iter().find(|e| e.label == "(Q,mu1)").unwrap();
        assert!(!q_mu1.passed());
    }

    #[test]
    fn sum_of_mu_is_minus_k_y() {
        for n in 2..=5 {
            let mut acc = WeightVector::zero(n);
            for i in 1..=n {
                acc = acc.add(&mu_vector_symbolic(i, n).unwrap());
            }
            let expected = WeightVector::basis(n, Basis::Y).scale(&-ScalarQ::k());
            assert_eq!(acc, expected);
        }
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let g = sym(3);
        let a = WeightVector::basis(2, Basis::Q);
        let b = WeightVector::basis(3, Basis::Q);
        assert_eq!(g.pairing(&a, &b).unwrap_err(), Error::RankMismatch(3, 2));
    }

    #[test]
    fn grading_examples() {
        let n = 3;
        let k = KMode::Symbolic;
        let g = sym(n);
        let e = FockState::highest_weight(Charge::basis(n, Basis::Y));
        let w = weight(&g, &k, &e);
        assert_eq!(w.len(), 1);
        assert_eq!(w.keys().next().unwrap(), &ScalarQ::one());

        let qm = FockMonomial::new(
            Charge::basis_multiple(n, Basis::Y, -1),
            vec![Mode {
                sym: Basis::Q.index(n) as u16,
                depth: 1,
            }],
        );
        let v = FockState::monomial(qm, ScalarQ::one());
        let w = weight(&g, &k, &v);
        assert_eq!(w.keys().cloned().collect::<Vec<_>>(), vec![ScalarQ::zero()]);

        let w = weight(&g, &k, &FockState::vacuum(n));
        assert_eq!(w[&ScalarQ::zero()], FockState::vacuum(n));

        assert_eq!(
            g.charge_weight(&Charge::basis(n, Basis::Q), &k),
            ScalarQ::one()
        );
        assert_eq!(
            g.charge_weight(&Charge::basis(n, Basis::A(2)), &k),
            ScalarQ::one()
        );
    }

    #[test]
    fn json_round_trip() {
        let n = 3;
        let mut s = FockState::vacuum(n).scale(&ScalarQ::k());
        s.add_term(
            FockMonomial::new(
                Charge::from_coords(vec![
                    Rational64::new(2, 3),
                    Rational64::zero(),
                    Rational64::one(),
                    Rational64::from_integer(-1),
                ]),
                vec![Mode { sym: 0, depth: 2 }, Mode { sym: 3, depth: 1 }],
            ),
            ScalarQ::from_ratio(-5, 7),
        );
        let j = s.to_json();
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains(r#""modes":[["A1",-2],["Y",-1]]"#), "{text}");
        let back: Vec<TermJson> = serde_json::from_str(&text).unwrap();
        assert_eq!(FockState::from_json(n, &back).unwrap(), s);
    }
}
