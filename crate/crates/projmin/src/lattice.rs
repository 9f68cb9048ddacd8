//! Full-rank lattices in `Q^n` and the adelic matrix action on them.
//!
//! A lattice is stored canonically as a positive rational `scale` times an
//! integer row basis in Hermite normal form with coefficient gcd 1, so
//! structural equality coincides with equality of lattices. Local behavior
//! at a prime is read off the Smith normal form of the basis. `glue_local`
//! builds the unique lattice with prescribed localizations at finitely many
//! primes, `AdeleMatrix` models a family of invertible matrices indexed by
//! primes (almost all of them integral with unit determinant), `act` is the
//! induced action on lattices, and `adelic_factorize` splits an adelic
//! matrix into an everywhere-integral-unit part times a single rational
//! matrix.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{factor, ord_p, ord_p_int, primes_excluding, Prime, Rational};
use crate::error::Error;
use crate::matrix::{IntMatrix, RatMatrix};
use crate::Result;

fn row_sub(m: &mut IntMatrix, i: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.n_cols() {
        let v = m.get(i, j) - q * m.get(k, j);
        m.set(i, j, v);
    }
}

fn row_negate(m: &mut IntMatrix, i: usize) {
    for j in 0..m.n_cols() {
        let v = -m.get(i, j).clone();
        m.set(i, j, v);
    }
}

fn col_sub(m: &mut IntMatrix, j: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.n_rows() {
        let v = m.get(i, j) - q * m.get(i, k);
        m.set(i, j, v);
    }
}

fn col_add(m: &mut IntMatrix, j: usize, k: usize, q: &BigInt) {
    col_sub(m, j, k, &-q.clone());
}

fn col_swap(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.n_rows() {
        let va = m.get(i, a).clone();
        let vb = m.get(i, b).clone();
        m.set(i, a, vb);
        m.set(i, b, va);
    }
}

fn col_negate(m: &mut IntMatrix, j: usize) {
    for i in 0..m.n_rows() {
        let v = -m.get(i, j).clone();
        m.set(i, j, v);
    }
}

/// Row Hermite normal form together with a unimodular transform:
/// `U · M = H`. Requires full column rank; `H` has one pivot per column
/// (positive, entries above it reduced into `[0, pivot)`), rows beyond the
/// rank are zero.
pub fn hermite_with_transform(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let rows = m.n_rows();
    let cols = m.n_cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row >= rows {
            return Err(Error::RankDeficient);
        }
        // Euclid on the entries at and below pivot_row in this column.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows {
                if !h.get(r, col).is_zero() {
                    let better = match best {
                        None => true,
                        Some(b) => h.get(r, col).abs() < h.get(b, col).abs(),
                    };
                    if better {
                        best = Some(r);
                    }
                }
            }
            let best = best.ok_or(Error::RankDeficient)?;
            if best != pivot_row {
                h.swap_rows(best, pivot_row);
                u.swap_rows(best, pivot_row);
            }
            let mut done = true;
            let pivot = h.get(pivot_row, col).clone();
            for r in pivot_row + 1..rows {
                if !h.get(r, col).is_zero() {
                    let q = h.get(r, col).div_floor(&pivot);
                    row_sub(&mut h, r, pivot_row, &q);
                    row_sub(&mut u, r, pivot_row, &q);
                    if !h.get(r, col).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h.get(pivot_row, col).is_negative() {
            row_negate(&mut h, pivot_row);
            row_negate(&mut u, pivot_row);
        }
        let pivot = h.get(pivot_row, col).clone();
        for r in 0..pivot_row {
            let q = h.get(r, col).div_floor(&pivot);
            row_sub(&mut h, r, pivot_row, &q);
            row_sub(&mut u, r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    debug_assert_eq!(u.mul(m).unwrap(), h);
    Ok((h, u))
}

/// Row Hermite normal form (see [`hermite_with_transform`]).
pub fn hermite_normal_form(m: &IntMatrix) -> Result<IntMatrix> {
    hermite_with_transform(m).map(|(h, _)| h)
}

/// Smith normal form of a square nonsingular integer matrix:
/// `M = U · S · V` with `U`, `V` unimodular and `S = diag(s_1, …, s_n)`,
/// `s_1 | s_2 | … | s_n`, all `s_i >= 1`.
pub fn smith_normal_form(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix, IntMatrix)> {
    if m.n_rows() != m.n_cols() {
        return Err(Error::Dimension(
            m.n_rows(),
            m.n_cols(),
            m.n_rows(),
            m.n_rows(),
        ));
    }
    let n = m.n_rows();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);
    // Invariant maintained by every step: m == u · s · v.
    for t in 0..n {
        'pivot: loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !s.get(i, j).is_zero() {
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => s.get(i, j).abs() < s.get(bi, bj).abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let (bi, bj) = best.ok_or(Error::RankDeficient)?;
            if bi != t {
                s.swap_rows(bi, t);
                col_swap(&mut u, bi, t);
            }
            if bj != t {
                col_swap(&mut s, bj, t);
                v.swap_rows(bj, t);
            }
            if s.get(t, t).is_negative() {
                row_negate(&mut s, t);
                col_negate(&mut u, t);
            }
            let pivot = s.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..n {
                if !s.get(i, t).is_zero() {
                    let q = s.get(i, t).div_floor(&pivot);
                    row_sub(&mut s, i, t, &q);
                    col_add(&mut u, t, i, &q);
                    if !s.get(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !s.get(t, j).is_zero() {
                    let q = s.get(t, j).div_floor(&pivot);
                    col_sub(&mut s, j, t, &q);
                    row_sub(&mut v, t, j, &-q);
                    if !s.get(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            // divisibility: the pivot must divide the whole trailing block
            for i in t + 1..n {
                for j in t + 1..n {
                    if !s.get(i, j).mod_floor(&pivot).is_zero() {
                        // fold row i into row t and restart this pivot
                        let minus_one = BigInt::from(-1);
                        row_sub(&mut s, t, i, &minus_one);
                        col_add(&mut u, i, t, &minus_one);
                        continue 'pivot;
                    }
                }
            }
            break;
        }
    }
    debug_assert_eq!(u.mul(&s).unwrap().mul(&v).unwrap(), *m);
    Ok((u, s, v))
}

/// Elementary p-power orders of a lattice's localization at a prime:
/// `L ⊗ Z_p = U · diag(p^{e_1}, …, p^{e_n}) · Z_p^n` with `e_1 ≤ … ≤ e_n`.
/// The all-zero vector says the localization is `Z_p^n` itself.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalLatticeData {
    prime: Prime,
    elementary_orders: Vec<i64>,
}

impl LocalLatticeData {
    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    pub fn elementary_orders(&self) -> &[i64] {
        &self.elementary_orders
    }

    pub fn is_trivial(&self) -> bool {
        self.elementary_orders.iter().all(|&e| e == 0)
    }
}

/// A full-rank lattice in `Q^n`: the row span over `Z` of `scale · basis`.
///
/// Canonical storage — `scale` a positive rational, `basis` an integer
/// row-Hermite matrix of coefficient gcd 1 — makes structural equality
/// coincide with equality of lattices.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    scale: Rational,
    basis: IntMatrix,
}

impl Lattice {
    /// The standard lattice `Z^n`.
    pub fn standard(n: usize) -> Lattice {
        Lattice {
            scale: Rational::one(),
            basis: IntMatrix::identity(n),
        }
    }

    /// Canonicalizes the row span of a full-rank generating set.
    pub fn from_generators(gens: &RatMatrix) -> Result<Lattice> {
        let n = gens.n_cols();
        if gens.n_rows() < n || n == 0 {
            return Err(Error::RankDeficient);
        }
        let (denom, cleared) = gens.clear_denominators();
        let (h, _) = hermite_with_transform(&cleared)?;
        let top = h.submatrix(&(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>());
        let content = top.content();
        debug_assert!(content.is_positive());
        let basis_rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| top.row(i).iter().map(|v| v / &content).collect())
            .collect();
        let basis = IntMatrix::from_rows(basis_rows)?;
        Ok(Lattice {
            scale: Rational::new(content, denom),
            basis,
        })
    }

    pub fn n(&self) -> usize {
        self.basis.n_rows()
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// The rational row basis `scale · basis`.
    pub fn rational_basis(&self) -> RatMatrix {
        self.basis.to_rational().scalar_mul(&self.scale)
    }

    /// An invertible matrix whose columns generate the lattice over `Z`.
    pub fn column_basis(&self) -> RatMatrix {
        self.rational_basis().transpose()
    }

    /// Positive by canonicality of the stored basis.
    pub fn det(&self) -> Rational {
        self.rational_basis().det()
    }

    /// Exact membership test.
    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.n() {
            return Err(Error::Dimension(1, v.len(), 1, self.n()));
        }
        let inv = self.column_basis().inverse()?;
        let coords = inv.mul_vec(v)?;
        Ok(coords.iter().all(|c| c.is_integer()))
    }

    /// The same lattice scaled by a nonzero rational (lattices are stable
    /// under negating, so the absolute value is used).
    pub fn rescale(&self, c: &Rational) -> Result<Lattice> {
        if c.is_zero() {
            return Err(Error::ScaleByZero);
        }
        Ok(Lattice {
            scale: &self.scale * c.abs(),
            basis: self.basis.clone(),
        })
    }

    /// Largest lattice contained in both: rows of the bottom transform block
    /// of the stacked Hermite system give a generating set.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        let n = self.n();
        if other.n() != n {
            return Err(Error::Dimension(n, n, other.n(), other.n()));
        }
        let a = self.rational_basis();
        let b = other.rational_basis();
        let mut stacked_rows: Vec<Vec<Rational>> = Vec::with_capacity(2 * n);
        for i in 0..n {
            stacked_rows.push(a.row(i).to_vec());
        }
        for i in 0..n {
            stacked_rows.push(b.row(i).to_vec());
        }
        let stacked = RatMatrix::from_rows(stacked_rows)?;
        let (denom, cleared) = stacked.clear_denominators();
        let (_, u) = hermite_with_transform(&cleared)?;
        // Bottom n transform rows annihilate the stack: u21·A + u22·B = 0,
        // so the rows of u21·A lie in (and generate) the intersection.
        let a_cleared = cleared.submatrix(
            &(0..n).collect::<Vec<_>>(),
            &(0..n).collect::<Vec<_>>(),
        );
        let u21 = u.submatrix(
            &(n..2 * n).collect::<Vec<_>>(),
            &(0..n).collect::<Vec<_>>(),
        );
        let gens = u21.mul(&a_cleared)?;
        let gens_rational = gens
            .to_rational()
            .scalar_mul(&Rational::new(BigInt::one(), denom));
        Lattice::from_generators(&gens_rational)
    }

    /// Local structure at `p` (see [`LocalLatticeData`]): the p-adic orders
    /// of the Smith invariants, shifted by the order of the scale.
    pub fn localize(&self, p: &Prime) -> Result<LocalLatticeData> {
        let (_, s, _) = smith_normal_form(&self.basis)?;
        let shift = ord_p(&self.scale, p).finite();
        let elementary_orders: Vec<i64> = (0..self.n())
            .map(|i| shift + ord_p_int(s.get(i, i), p).finite())
            .collect();
        debug_assert!(elementary_orders.windows(2).all(|w| w[0] <= w[1]));
        Ok(LocalLatticeData {
            prime: p.clone(),
            elementary_orders,
        })
    }

    /// A matrix whose columns generate the localization at `p` in the
    /// canonical `U · diag(p^{e_i})` shape.
    pub fn local_generator(&self, p: &Prime) -> Result<RatMatrix> {
        prescribed_local_generator(p, &self.column_basis())
    }

    /// The finitely many primes with nontrivial localization.
    pub fn support(&self) -> Result<Vec<Prime>> {
        let mut primes: Vec<Prime> = Vec::new();
        let mut push_from = |n: &BigInt| -> Result<()> {
            for p in factor(n)?.keys() {
                if !primes.contains(p) {
                    primes.push(p.clone());
                }
            }
            Ok(())
        };
        push_from(self.scale.numer())?;
        push_from(self.scale.denom())?;
        push_from(&self.basis.det_bareiss())?;
        primes.sort_by(|a, b| a.value().cmp(b.value()));
        let mut out = Vec::new();
        for p in primes {
            if !self.localize(&p)?.is_trivial() {
                out.push(p);
            }
        }
        Ok(out)
    }
}

impl Lattice {
    fn fmt_rows(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.rational_basis();
        write!(f, "[")?;
        for i in 0..b.n_rows() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for j in 0..b.n_cols() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", b.get(i, j))?;
            }
            write!(f, ")")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_rows(f)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_rows(f)
    }
}

/// Canonical local generator: for invertible `A`, a matrix `H` with entries
/// in `Z[1/p]`, `|det H|` a power of `p`, `H·Z_p^n = A·Z_p^n`, and
/// `H·Z_q^n = Z_q^n` for every other prime `q`. Built from the Smith form of
/// the cleared matrix: `A = (1/m)A'`, `A' = U·S·V` gives
/// `H = U · diag(p^{ord_p(s_i) - ord_p(m)})`.
pub fn prescribed_local_generator(p: &Prime, a: &RatMatrix) -> Result<RatMatrix> {
    let (u, exps) = local_column_data(p, a)?;
    let n = u.n_rows();
    let mut h = RatMatrix::zero(n, n);
    for j in 0..n {
        let pw = p_power(p, exps[j]);
        for i in 0..n {
            h.set(i, j, Rational::from_integer(u.get(i, j).clone()) * &pw);
        }
    }
    Ok(h)
}

/// `p^e` as an exact rational, any sign of `e`.
pub(crate) fn p_power(p: &Prime, e: i64) -> Rational {
    let pw = BigInt::from(p.value().clone()).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(pw)
    } else {
        Rational::new(BigInt::one(), pw)
    }
}

/// Unimodular `U` and exponents `e` with `A·Z_p^n = U·diag(p^{e_i})·Z_p^n`.
fn local_column_data(p: &Prime, a: &RatMatrix) -> Result<(IntMatrix, Vec<i64>)> {
    if !a.is_square() {
        return Err(Error::Dimension(
            a.n_rows(),
            a.n_cols(),
            a.n_rows(),
            a.n_rows(),
        ));
    }
    if a.det().is_zero() {
        return Err(Error::Singular);
    }
    let (m, cleared) = a.clear_denominators();
    let (u, s, _) = smith_normal_form(&cleared)?;
    let shift = ord_p_int(&m, p).finite();
    let exps: Vec<i64> = (0..a.n_rows())
        .map(|i| ord_p_int(s.get(i, i), p).finite() - shift)
        .collect();
    Ok((u, exps))
}

/// The unique lattice whose localization is `A_p·Z_p^n` at each supported
/// prime and `Z_q^n` everywhere else. Empty data gives `Z^n`.
///
/// A superlattice datum (negative local orders) is handled by rescaling:
/// with `D = Π p^{m_p}` chosen so every `D·A_p·Z_p^n` sits inside `Z_p^n`,
/// the rescaled target is an honest intersection of integer lattices, one
/// per supported prime, and the result is divided by `D` afterwards. The
/// postcondition is re-verified at every supported prime and at the first
/// three primes outside the support.
pub fn glue_local(n: usize, data: &BTreeMap<Prime, RatMatrix>) -> Result<Lattice> {
    if data.is_empty() {
        return Ok(Lattice::standard(n));
    }
    let mut d = Rational::one();
    let mut pieces: Vec<Lattice> = Vec::new();
    for (p, a) in data {
        if a.n_rows() != n || a.n_cols() != n {
            return Err(Error::Dimension(a.n_rows(), a.n_cols(), n, n));
        }
        let (u, exps) = local_column_data(p, a)?;
        let min_e = exps.iter().copied().min().expect("n >= 1");
        let m_p = (-min_e).max(0);
        d *= p_power(p, m_p);
        let shifted: Vec<i64> = exps.iter().map(|e| e + m_p).collect();
        let k = shifted.iter().copied().max().expect("n >= 1");
        // generators: columns of u·diag(p^shifted), then p^k·Z^n
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(2 * n);
        for j in 0..n {
            let pw = p_power(p, shifted[j]);
            rows.push(
                (0..n)
                    .map(|i| Rational::from_integer(u.get(i, j).clone()) * &pw)
                    .collect(),
            );
        }
        let pk = p_power(p, k);
        for i in 0..n {
            let mut row = vec![Rational::zero(); n];
            row[i] = pk.clone();
            rows.push(row);
        }
        pieces.push(Lattice::from_generators(&RatMatrix::from_rows(rows)?)?);
    }
    let mut acc = pieces[0].clone();
    for piece in &pieces[1..] {
        acc = acc.intersect(piece)?;
    }
    let glued = acc.rescale(&(Rational::one() / &d))?;

    // Always-on audit of the defining property.
    let c = glued.column_basis();
    for (p, a) in data {
        let check = a.inverse()?.mul(&c)?;
        assert!(
            check.is_p_unimodular(p),
            "glued lattice has the wrong localization at {p}"
        );
    }
    for q in primes_excluding(3, data.keys()) {
        assert!(
            c.is_p_unimodular(&q),
            "glued lattice is nontrivial off the support, at {q}"
        );
    }
    Ok(glued)
}

/// A family of invertible rational matrices indexed by the primes, equal to
/// `tail` at all but the finitely many primes in `entries`. Freshly
/// constructed values have identity tail; general tails arise from the group
/// operations (and from [`adelic_factorize`], whose integral factor is a
/// constant family off the support).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdeleMatrix {
    n: usize,
    entries: BTreeMap<Prime, RatMatrix>,
    tail: RatMatrix,
}

impl AdeleMatrix {
    /// Finitely supported family, identity off the support. Entries already
    /// integral at their prime with unit determinant are dropped: they are
    /// indistinguishable from the identity for every lattice-level question
    /// asked of a freshly constructed family.
    pub fn new(n: usize, entries: BTreeMap<Prime, RatMatrix>) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (p, a) in entries {
            if a.n_rows() != n || a.n_cols() != n {
                return Err(Error::Dimension(a.n_rows(), a.n_cols(), n, n));
            }
            if a.det().is_zero() {
                return Err(Error::Singular);
            }
            if !a.is_p_unimodular(&p) {
                kept.insert(p, a);
            }
        }
        Ok(AdeleMatrix {
            n,
            entries: kept,
            tail: RatMatrix::identity(n),
        })
    }

    pub fn identity(n: usize) -> Self {
        AdeleMatrix {
            n,
            entries: BTreeMap::new(),
            tail: RatMatrix::identity(n),
        }
    }

    /// The constant family: one invertible matrix at every prime.
    pub fn principal(m: &RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(m.n_rows(), m.n_cols(), m.n_rows(), m.n_rows()));
        }
        if m.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(AdeleMatrix {
            n: m.n_rows(),
            entries: BTreeMap::new(),
            tail: m.clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<Prime, RatMatrix> {
        &self.entries
    }

    pub fn tail(&self) -> &RatMatrix {
        &self.tail
    }

    /// The component at a prime: the stored entry, or the tail.
    pub fn component(&self, p: &Prime) -> &RatMatrix {
        self.entries.get(p).unwrap_or(&self.tail)
    }

    pub fn is_identity(&self) -> bool {
        self.entries.is_empty() && self.tail.is_identity()
    }

    /// Componentwise product. Only entries exactly equal to the new tail are
    /// dropped: a component in `GL_n(Z_p)` still moves lattices whose
    /// localization at `p` is nontrivial, so it cannot be normalized away
    /// from a general product.
    pub fn mul(&self, other: &AdeleMatrix) -> Result<AdeleMatrix> {
        if self.n != other.n {
            return Err(Error::Dimension(self.n, self.n, other.n, other.n));
        }
        let tail = self.tail.mul(&other.tail)?;
        let mut entries = BTreeMap::new();
        for p in self.entries.keys().chain(other.entries.keys()) {
            if entries.contains_key(p) {
                continue;
            }
            let comp = self.component(p).mul(other.component(p))?;
            if comp != tail {
                entries.insert(p.clone(), comp);
            }
        }
        Ok(AdeleMatrix {
            n: self.n,
            entries,
            tail,
        })
    }

    /// Componentwise inverse.
    pub fn inverse(&self) -> Result<AdeleMatrix> {
        let tail = self.tail.inverse()?;
        let mut entries = BTreeMap::new();
        for (p, a) in &self.entries {
            let inv = a.inverse()?;
            if inv != tail {
                entries.insert(p.clone(), inv);
            }
        }
        Ok(AdeleMatrix {
            n: self.n,
            entries,
            tail,
        })
    }

    /// The lattice whose localization at every prime `p` is
    /// `component(p) · L_p`.
    ///
    /// Factoring the tail out on the left reduces to the finitely-supported
    /// identity-tail case, which is a conjugated glue: with `B` the column
    /// basis of `L`, the result is `(tail·B) · glue({p ↦ B⁻¹·tail⁻¹·A_p·B})`.
    pub fn act(&self, l: &Lattice) -> Result<Lattice> {
        if l.n() != self.n {
            return Err(Error::Dimension(self.n, self.n, l.n(), l.n()));
        }
        let b = l.column_basis();
        let front = self.tail.mul(&b)?;
        if self.entries.is_empty() {
            return principal_act(&front, &Lattice::standard(self.n));
        }
        let b_inv = b.inverse()?;
        let tail_inv = self.tail.inverse()?;
        let mut conjugated = BTreeMap::new();
        for (p, a) in &self.entries {
            let local = b_inv.mul(&tail_inv)?.mul(a)?.mul(&b)?;
            conjugated.insert(p.clone(), local);
        }
        let inner = glue_local(self.n, &conjugated)?;
        principal_act(&front, &inner)
    }
}

/// One invertible matrix applied to a lattice: the column span of `M · C`.
fn principal_act(m: &RatMatrix, l: &Lattice) -> Result<Lattice> {
    let moved = m.mul(&l.column_basis())?;
    Lattice::from_generators(&moved.transpose())
}

/// Splits an adelic matrix as `A = C · B` with `B` a single invertible
/// rational matrix (embedded as a constant family) and every component of
/// `C` integral with unit determinant at its prime. `B` is pinned by the
/// canonical basis of the lattice `act(A^{-1}, Z^n)`, whose columns are
/// `B^{-1}`.
pub fn adelic_factorize(a: &AdeleMatrix) -> Result<(AdeleMatrix, RatMatrix)> {
    let n = a.n();
    let x = a.inverse()?.act(&Lattice::standard(n))?;
    let b_inverse = x.column_basis();
    let b = b_inverse.inverse()?;
    let c = a.mul(&AdeleMatrix::principal(&b_inverse)?)?;
    for (p, comp) in c.entries() {
        assert!(
            comp.is_p_unimodular(p),
            "integral factor fails to stabilize the trivial lattice at {p}"
        );
    }
    Ok((c, b))
}
