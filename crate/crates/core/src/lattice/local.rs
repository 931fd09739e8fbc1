//! Compact enumeration of a ball around the standard lattice.
//!
//! A lattice `L` with `dist(Z_p^n, L) <= r` satisfies
//! `p^r Z_p^n ⊆ L ⊆ p^-r Z_p^n`, so `H = p^r L` sits between `p^k Z_p^n`
//! (`k = 2r`) and `Z_p^n` and is determined by its image in
//! `(Z/p^(k+1))^n`. Its canonical basis is an integer upper-triangular matrix
//! with entries below `p^k`, stored packed. Index computations then run in
//! word-sized modular arithmetic, which is what makes million-element balls
//! tractable.

use indexmap::IndexSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{projective_points, Lattice};
use crate::exactnum::{PMatrix, PScalar, Prime, Valuation};

/// Largest supported dimension.
pub const MAX_DIM: usize = 4;
const PACKED: usize = MAX_DIM * (MAX_DIM + 1) / 2;
/// Moduli stay below this so that sums of four products fit in a `u64`.
const MODULUS_LIMIT: u64 = 1 << 30;

type Col = [u64; MAX_DIM];
type Packed = [u32; PACKED];

#[inline]
fn packed_index(r: usize, c: usize) -> usize {
    c * (c + 1) / 2 + r
}

/// Barrett reduction modulo a fixed `q < 2^30`.
#[derive(Debug, Clone, Copy)]
struct Modulus {
    q: u64,
    m: u64,
}

impl Modulus {
    fn new(q: u64) -> Self {
        debug_assert!((2..MODULUS_LIMIT).contains(&q));
        Modulus {
            q,
            m: ((1u128 << 64) / q as u128) as u64,
        }
    }

    #[inline]
    fn reduce(self, x: u64) -> u64 {
        let quot = ((x as u128 * self.m as u128) >> 64) as u64;
        let r = x - quot * self.q;
        if r >= self.q {
            r - self.q
        } else {
            r
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    /// `u a - c b`
    #[inline]
    fn comb(self, u: u64, a: u64, c: u64, b: u64) -> u64 {
        self.reduce(u * a + (self.q - c) * b)
    }
}

#[inline]
fn val_capped(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while v < cap && x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "not a unit");
    t0.rem_euclid(m as i128) as u64
}

fn prime_powers(p: u64, limit: u64) -> Vec<u64> {
    let mut pows = vec![1u64];
    while let Some(next) = pows.last().unwrap().checked_mul(p).filter(|&x| x < limit) {
        pows.push(next);
    }
    pows
}

/// Modular column elimination for a lattice `J` with `p^k Z^n ⊆ J ⊆ Z^n`,
/// working modulo `p^(k+1)`.
///
/// Rows are processed from the bottom. After each pivot `g` of valuation `a`
/// the element `p^(k+1-a) g` joins the pool, so the pool keeps spanning every
/// element of `J` whose lower coordinates vanish.
struct Hermite {
    n: usize,
    p: u64,
    k: u32,
    md: Modulus,
    pows: Vec<u64>,
}

impl Hermite {
    fn new(n: usize, p: u64, k: u32, pows: &[u64]) -> Option<Self> {
        let q = *pows.get(k as usize + 1)?;
        Some(Hermite {
            n,
            p,
            k,
            md: Modulus::new(q),
            pows: pows[..=k as usize + 1].to_vec(),
        })
    }

    fn canonical(&self, gens: &[Col]) -> Packed {
        let (n, p, k, md) = (self.n, self.p, self.k, self.md);
        let mut pool = [[0u64; MAX_DIM]; 4 * MAX_DIM];
        let mut len = 0;
        for g in gens {
            pool[len] = *g;
            len += 1;
        }
        for i in 0..n {
            pool[len] = [0; MAX_DIM];
            pool[len][i] = self.pows[k as usize];
            len += 1;
        }
        let mut cols = [[0u64; MAX_DIM]; MAX_DIM];
        let mut exps = [0u32; MAX_DIM];
        for i in (0..n).rev() {
            let mut best = (k + 2, 0);
            for (j, c) in pool[..len].iter().enumerate() {
                let v = val_capped(c[i], p, k + 1);
                if v < best.0 {
                    best = (v, j);
                    if v == 0 {
                        break;
                    }
                }
            }
            let (a, pi) = best;
            debug_assert!(a <= k);
            let mut g = pool[pi];
            len -= 1;
            pool[pi] = pool[len];
            let pa = self.pows[a as usize];
            let unit = g[i] / pa;
            if unit != 1 {
                let uinv = inv_mod(unit, md.q);
                for x in g[..=i].iter_mut() {
                    *x = md.mul(*x, uinv);
                }
            }
            let mut j = 0;
            while j < len {
                let h = &mut pool[j];
                if h[i] != 0 {
                    let c = h[i] / pa;
                    for r in 0..=i {
                        h[r] = md.sub(h[r], md.mul(c, g[r]));
                    }
                }
                if h[..i].iter().all(|&x| x == 0) {
                    len -= 1;
                    pool[j] = pool[len];
                } else {
                    j += 1;
                }
            }
            if a > 0 {
                let lift = self.pows[(k + 1 - a) as usize];
                let mut extra = [0u64; MAX_DIM];
                for r in 0..i {
                    extra[r] = md.mul(g[r], lift);
                }
                if extra[..i].iter().any(|&x| x != 0) {
                    pool[len] = extra;
                    len += 1;
                }
            }
            cols[i] = g;
            exps[i] = a;
        }
        // reduce above the diagonal, bottom rows first
        for r in (0..n.saturating_sub(1)).rev() {
            let pr = self.pows[exps[r] as usize];
            for c in r + 1..n {
                let t = cols[c][r] / pr;
                if t == 0 {
                    continue;
                }
                for row in 0..=r {
                    let s = md.mul(t, cols[r][row]);
                    cols[c][row] = md.sub(cols[c][row], s);
                }
            }
        }
        let mut packed = [0u32; PACKED];
        for c in 0..n {
            for r in 0..=c {
                packed[packed_index(r, c)] = cols[c][r] as u32;
            }
        }
        packed
    }
}

fn unpack(n: usize, h: &Packed) -> [Col; MAX_DIM] {
    let mut cols = [[0u64; MAX_DIM]; MAX_DIM];
    for c in 0..n {
        for r in 0..=c {
            cols[c][r] = h[packed_index(r, c)] as u64;
        }
    }
    cols
}

/// `p^k H^-1`, exact, for an upper-triangular `H` with diagonal `p^a_i`.
fn scaled_inverse(n: usize, h: &[Col; MAX_DIM], pows: &[u64], p: u64, k: u32) -> [[i128; MAX_DIM]; MAX_DIM] {
    let mut y = [[0i128; MAX_DIM]; MAX_DIM];
    let diag: Vec<u32> = (0..n).map(|i| val_capped(h[i][i], p, k + 1)).collect();
    for j in 0..n {
        y[j][j] = pows[(k - diag[j]) as usize] as i128;
        for i in (0..j).rev() {
            let mut acc = 0i128;
            for t in i + 1..=j {
                acc += h[t][i] as i128 * y[t][j];
            }
            let pa = pows[diag[i] as usize] as i128;
            debug_assert_eq!(acc % pa, 0);
            y[i][j] = -acc / pa;
        }
    }
    y
}

/// Residue of a `Z_(p)`-integral rational modulo `m`.
fn residue(x: &PScalar, m: u64) -> u64 {
    let mb = BigInt::from(m);
    let inv = x.denom().modinv(&mb).expect("denominator prime to p");
    (x.numer() * inv).mod_floor(&mb).to_u64().expect("reduced")
}

/// The ball `ball(Z_p^n, r)` in compact form, in breadth-first order.
pub struct LocalBall {
    p: Prime,
    n: usize,
    radius: u32,
    pows: Vec<u64>,
    lattices: IndexSet<Packed>,
    /// `p^k H^-1` per lattice, reduced modulo `p^scan_exp`
    inverses: Vec<Packed>,
    scan_exp: u32,
    layer_ends: Vec<usize>,
}

impl LocalBall {
    /// Enumerates the ball. Returns `None` when `n` exceeds [`MAX_DIM`] or the
    /// required moduli do not fit the word-sized arithmetic.
    pub fn new(n: usize, p: Prime, radius: u32) -> Option<Self> {
        if n == 0 || n > MAX_DIM {
            return None;
        }
        let pu = p.get();
        let k = 2 * radius;
        let pows = prime_powers(pu, MODULUS_LIMIT);
        let herm = Hermite::new(n, pu, k, &pows)?;
        let scan_exp = (pows.len() - 1) as u32;

        let mut lattices: IndexSet<Packed> = IndexSet::new();
        let mut start = [[0u64; MAX_DIM]; MAX_DIM];
        for (i, col) in start.iter_mut().enumerate().take(n) {
            col[i] = pows[radius as usize];
        }
        lattices.insert(herm.canonical(&start[..n]));
        let mut layer_ends = vec![1usize];
        let lines = projective_points(n, p);
        let md = herm.md;
        for _ in 0..radius {
            let begin = if layer_ends.len() >= 2 { layer_ends[layer_ends.len() - 2] } else { 0 };
            let end = *layer_ends.last().unwrap();
            for idx in begin..end {
                let b = unpack(n, &lattices[idx]);
                for f in &lines {
                    // index-p sublattice: kernel of x -> Σ f_i x_i mod p
                    let j = f.iter().position(|&c| c != 0).expect("nonzero");
                    let mut gens = [[0u64; MAX_DIM]; MAX_DIM];
                    for i in 0..n {
                        for r in 0..n {
                            gens[i][r] = if i == j {
                                md.mul(b[j][r], pu)
                            } else {
                                md.sub(b[i][r], md.mul(f[i], b[j][r]))
                            };
                        }
                    }
                    lattices.insert(herm.canonical(&gens[..n]));
                }
                for c in &lines {
                    // index-p superlattice through (1/p) Σ c_i b_i
                    let j = c.iter().position(|&x| x != 0).expect("nonzero");
                    let mut v = [0u64; MAX_DIM];
                    for (i, &ci) in c.iter().enumerate() {
                        for r in 0..n {
                            v[r] += ci * b[i][r];
                        }
                    }
                    if v[..n].iter().any(|&x| x % pu != 0) {
                        continue;
                    }
                    let mut gens = b;
                    for r in 0..n {
                        gens[j][r] = md.reduce(v[r] / pu);
                    }
                    lattices.insert(herm.canonical(&gens[..n]));
                }
            }
            layer_ends.push(lattices.len());
        }

        let scan_q = pows[scan_exp as usize];
        let inverses = lattices
            .iter()
            .map(|h| {
                let y = scaled_inverse(n, &unpack(n, h), &pows, pu, k);
                let mut packed = [0u32; PACKED];
                for c in 0..n {
                    for r in 0..=c {
                        packed[packed_index(r, c)] = y[r][c].rem_euclid(scan_q as i128) as u32;
                    }
                }
                packed
            })
            .collect();

        Some(LocalBall {
            p,
            n,
            radius,
            pows,
            lattices,
            inverses,
            scan_exp,
            layer_ends,
        })
    }

    pub fn len(&self) -> usize {
        self.lattices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattices.is_empty()
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Number of lattices at each exact distance `0..=r`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut prev = 0;
        self.layer_ends
            .iter()
            .map(|&e| {
                let s = e - prev;
                prev = e;
                s
            })
            .collect()
    }

    /// Materializes element `idx` as a [`Lattice`].
    pub fn lattice(&self, idx: usize) -> Lattice {
        let cols = unpack(self.n, &self.lattices[idx]);
        let cols: Vec<Vec<PScalar>> = cols[..self.n]
            .iter()
            .map(|c| c[..self.n].iter().map(|&x| PScalar::from(x as i64)).collect())
            .collect();
        let h = PMatrix::from_cols(&cols);
        Lattice::canonicalize(&h.scale(&self.p.pow(-(self.radius as i64))), self.p)
            .expect("full rank")
    }

    /// Exponent of `[gL : gL ∩ L]` for every lattice `L` of the ball, passed
    /// to `callback(idx, exponent)` in breadth-first order; stops when the
    /// callback returns `false`. Returns `None` if `g` has entries too far
    /// from integral for the word-sized modulus.
    ///
    /// With `Y = p^k H^-1` and `G = p^e g` integral, `X = Y G H` equals
    /// `p^(k+e) H^-1 g H`, whose Smith exponents are those of `gL` relative to
    /// `L` shifted by `k + e`.
    pub fn for_each_forward_index(
        &self,
        g: &PMatrix,
        mut callback: impl FnMut(usize, u64) -> bool,
    ) -> Option<()> {
        let (n, p) = (self.n, self.p.get());
        assert_eq!(g.rows(), n);
        let e = match g.min_val(self.p) {
            Valuation::Finite(v) if v < 0 => (-v) as u32,
            Valuation::Finite(_) => 0,
            Valuation::Infinite => return None,
        };
        let k = 2 * self.radius;
        let shift = k + e;
        let cap = self.scan_exp;
        if shift > cap {
            return None;
        }
        let md = Modulus::new(self.pows[cap as usize]);
        let gs = g.scale(&self.p.pow(e as i64));
        let mut gm = [[0u64; MAX_DIM]; MAX_DIM];
        for (i, row) in gm.iter_mut().enumerate().take(n) {
            for (j, x) in row.iter_mut().enumerate().take(n) {
                *x = residue(&gs[(i, j)], md.q);
            }
        }

        for (idx, (h, y)) in self.lattices.iter().zip(&self.inverses).enumerate() {
            // GH, with H upper triangular
            let mut gh = [[0u64; MAX_DIM]; MAX_DIM];
            for i in 0..n {
                for c in 0..n {
                    let mut acc = 0u64;
                    for t in 0..=c {
                        acc += gm[i][t] * h[packed_index(t, c)] as u64;
                    }
                    gh[i][c] = md.reduce(acc);
                }
            }
            // X = Y (GH), with Y upper triangular
            let mut x = [[0u64; MAX_DIM]; MAX_DIM];
            for i in 0..n {
                for c in 0..n {
                    let mut acc = 0u64;
                    for t in i..n {
                        acc += y[packed_index(i, t)] as u64 * gh[t][c];
                    }
                    x[i][c] = md.reduce(acc);
                }
            }
            let fwd = capped_smith_deficit(&mut x, n, p, cap, shift, md);
            if !callback(idx, fwd) {
                break;
            }
        }
        Some(())
    }

    /// Minimum of `[gL : gL ∩ L]` over the ball, and the first lattice in
    /// breadth-first order attaining it.
    pub fn min_forward_index(&self, g: &PMatrix) -> Option<(u64, usize)> {
        // [gL : gL∩L] - [L : gL∩L] = -v(det g), so the index is at least that
        let floor = match g.det().ok()?.val(self.p) {
            Valuation::Finite(v) => (-v).max(0) as u64,
            Valuation::Infinite => return None,
        };
        let mut best: Option<(u64, usize)> = None;
        self.for_each_forward_index(g, |idx, fwd| {
            if best.is_none_or(|(b, _)| fwd < b) {
                best = Some((fwd, idx));
            }
            fwd > floor
        })?;
        best
    }
}

/// `ball(Z_p^n, r)` in breadth-first order, through [`LocalBall`] when the
/// sizes allow it.
pub fn standard_ball(n: usize, p: Prime, radius: u32) -> Vec<Lattice> {
    match LocalBall::new(n, p, radius) {
        Some(b) => (0..b.len()).map(|i| b.lattice(i)).collect(),
        None => super::ball_layers(&Lattice::standard(n, p), radius as u64)
            .into_iter()
            .flatten()
            .collect(),
    }
}

/// `Σ max(0, shift - x_i)` over the Smith exponents `x_i` of `x` modulo
/// `p^cap`; exponents at or beyond `cap` contribute nothing.
#[inline]
fn capped_smith_deficit(
    x: &mut [[u64; MAX_DIM]; MAX_DIM],
    n: usize,
    p: u64,
    cap: u32,
    shift: u32,
    md: Modulus,
) -> u64 {
    let mut deficit = 0u64;
    for t in 0..n {
        let mut best = (cap, t, t);
        'search: for i in t..n {
            for j in t..n {
                let v = val_capped(x[i][j], p, cap);
                if v < best.0 {
                    best = (v, i, j);
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let (a, bi, bj) = best;
        if a >= shift {
            // all remaining exponents are at least `a`
            break;
        }
        deficit += (shift - a) as u64;
        x.swap(t, bi);
        for row in x.iter_mut().take(n) {
            row.swap(t, bj);
        }
        let pa = p.pow(a);
        let unit = x[t][t] / pa;
        for r in t + 1..n {
            if x[r][t] == 0 {
                continue;
            }
            let c = x[r][t] / pa;
            for j in t..n {
                x[r][j] = md.comb(unit, x[r][j], c, x[t][j]);
            }
        }
    }
    deficit
}

impl std::fmt::Debug for LocalBall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LocalBall")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("radius", &self.radius)
            .field("len", &self.lattices.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ball;

    #[test]
    fn matches_generic_ball() {
        for (n, p, r) in [(2, 2, 3), (2, 3, 2), (3, 2, 2), (2, 5, 2), (4, 2, 1)] {
            let p = Prime::new(p).unwrap();
            let local = LocalBall::new(n, p, r).unwrap();
            let mut from_local: Vec<Lattice> = (0..local.len()).map(|i| local.lattice(i)).collect();
            from_local.sort();
            let generic = ball(&Lattice::standard(n, p), r as u64);
            assert_eq!(from_local, generic, "n={n} p={p} r={r}");
        }
    }

    #[test]
    fn sphere_sizes_p2() {
        let p = Prime::new(2).unwrap();
        let b = LocalBall::new(2, p, 3).unwrap();
        assert_eq!(b.sphere_sizes(), vec![1, 6, 20, 54]);
    }

    #[test]
    fn unsupported_sizes() {
        let p = Prime::new(2).unwrap();
        assert!(LocalBall::new(5, p, 1).is_none());
        assert!(LocalBall::new(2, Prime::new(1_000_003).unwrap(), 2).is_none());
    }

    #[test]
    fn forward_index_matches_exact_route() {
        let p = Prime::new(3).unwrap();
        let b = LocalBall::new(2, p, 2).unwrap();
        let gs = [
            PMatrix::from_rows(vec![
                vec![PScalar::from(1), p.pow(-1)],
                vec![PScalar::from(3), PScalar::from(-1)],
            ])
            .unwrap(),
            PMatrix::diag_p_powers(p, &[2, -1]),
            PMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]),
        ];
        for g in &gs {
            b.for_each_forward_index(g, |idx, fwd| {
                let l = b.lattice(idx);
                let gl = l.apply(g).unwrap();
                assert_eq!(fwd, gl.index_over_meet(&l).unwrap(), "g={g} L={l}");
                true
            })
            .unwrap();
        }
    }

    #[test]
    fn forward_index_three_dims() {
        let p = Prime::new(2).unwrap();
        let b = LocalBall::new(3, p, 2).unwrap();
        let g = PMatrix::from_rows(vec![
            vec![PScalar::zero(), PScalar::one(), p.pow(-1)],
            vec![PScalar::from(2), PScalar::zero(), PScalar::one()],
            vec![PScalar::one(), PScalar::from(-1), PScalar::one()],
        ])
        .unwrap();
        b.for_each_forward_index(&g, |idx, fwd| {
            let l = b.lattice(idx);
            assert_eq!(fwd, l.apply(&g).unwrap().index_over_meet(&l).unwrap());
            true
        })
        .unwrap();
    }
}
