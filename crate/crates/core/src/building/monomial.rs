use serde::Serialize;

use crate::exactnum::{PMatrix, Prime};

/// `x ↦ a + σ(x)` on the apartment `Z^n`, where `σ(x)_{σ(i)} = x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialElement {
    pub translation: Vec<i64>,
    /// `perm[i] = σ(i)`
    pub perm: Vec<usize>,
}

impl MonomialElement {
    pub fn new(translation: Vec<i64>, perm: Vec<usize>) -> Self {
        assert_eq!(translation.len(), perm.len());
        let mut seen = vec![false; perm.len()];
        for &s in &perm {
            assert!(s < perm.len() && !seen[s], "not a permutation: {perm:?}");
            seen[s] = true;
        }
        MonomialElement { translation, perm }
    }

    pub fn identity(n: usize) -> Self {
        MonomialElement::new(vec![0; n], (0..n).collect())
    }

    pub fn translation(a: Vec<i64>) -> Self {
        let n = a.len();
        MonomialElement::new(a, (0..n).collect())
    }

    pub fn permutation(perm: Vec<usize>) -> Self {
        MonomialElement::new(vec![0; perm.len()], perm)
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_translation(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &s)| i == s)
    }

    fn permute(&self, x: &[i64]) -> Vec<i64> {
        let mut out = vec![0; x.len()];
        for (i, &s) in self.perm.iter().enumerate() {
            out[s] = x[i];
        }
        out
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.permute(x)
            .iter()
            .zip(&self.translation)
            .map(|(y, a)| y + a)
            .collect()
    }

    /// `(a, σ)(b, τ) = (a + σ(b), στ)`.
    pub fn compose(&self, other: &MonomialElement) -> MonomialElement {
        let translation = self
            .permute(&other.translation)
            .iter()
            .zip(&self.translation)
            .map(|(b, a)| a + b)
            .collect();
        let perm = other.perm.iter().map(|&t| self.perm[t]).collect();
        MonomialElement { translation, perm }
    }

    pub fn inverse(&self) -> MonomialElement {
        let mut inv = vec![0; self.dim()];
        for (i, &s) in self.perm.iter().enumerate() {
            inv[s] = i;
        }
        let sigma_inv = MonomialElement::permutation(inv);
        let translation = sigma_inv.permute(&self.translation).iter().map(|x| -x).collect();
        MonomialElement {
            translation,
            perm: sigma_inv.perm,
        }
    }

    /// L1 distance moved by the origin.
    pub fn origin_displacement(&self) -> u64 {
        self.translation.iter().map(|x| x.unsigned_abs()).sum()
    }

    /// The matrix `diag(p^a) P_σ`, with `P_σ e_i = e_{σ(i)}`. It maps the
    /// lattice `diag(p^x) Z_p^n` to `diag(p^(a + σ(x))) Z_p^n`.
    pub fn to_matrix(&self, p: Prime) -> PMatrix {
        let n = self.dim();
        let mut cols = vec![vec![crate::exactnum::PScalar::zero(); n]; n];
        for (i, &s) in self.perm.iter().enumerate() {
            cols[i][s] = p.pow(self.translation[s]);
        }
        PMatrix::from_cols(&cols)
    }

    /// Reads a monomial matrix back, dropping unit factors. `None` unless
    /// every column has exactly one nonzero entry.
    pub fn from_matrix(m: &PMatrix, p: Prime) -> Option<MonomialElement> {
        let n = m.rows();
        let mut translation = vec![0; n];
        let mut perm = vec![0; n];
        let mut hit = vec![false; n];
        for (i, col) in m.columns().iter().enumerate() {
            let mut nz = col.iter().enumerate().filter(|(_, x)| !x.is_zero());
            let (s, x) = nz.next()?;
            if nz.next().is_some() || hit[s] {
                return None;
            }
            hit[s] = true;
            perm[i] = s;
            translation[s] = x.val(p).finite()?;
        }
        Some(MonomialElement { translation, perm })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MonomialVerdict {
    /// every conjugate moves every point by `displacement`
    Bounded { displacement: u64 },
    /// conjugates by the translations `b_k` move the origin by
    /// `displacements[k-1]`
    Escaping {
        conjugators: Vec<Vec<i64>>,
        displacements: Vec<u64>,
    },
}

impl MonomialVerdict {
    pub fn is_bounded(&self) -> bool {
        matches!(self, MonomialVerdict::Bounded { .. })
    }
}

/// Whether the conjugacy class of `m` in the monomial group is bounded.
///
/// A translation `(a, id)` has conjugates `(τ(a), id)`, which move every
/// point by `|a|_1`. Otherwise pick `i` with `j = σ(i) ≠ i`; conjugating by
/// `b_k = ±k (e_i - e_j)` gives `(a + b_k - σ(b_k), σ)`, and one of the two
/// signs moves the origin by at least `4k`.
pub fn monomial_bounded_class(m: &MonomialElement, conj_depth: usize) -> MonomialVerdict {
    if m.is_translation() {
        return MonomialVerdict::Bounded {
            displacement: m.origin_displacement(),
        };
    }
    let i = (0..m.dim()).find(|&i| m.perm[i] != i).expect("non-trivial permutation");
    let j = m.perm[i];
    let mut conjugators = Vec::new();
    let mut displacements = Vec::new();
    for k in 1..=conj_depth.max(1) as i64 {
        let best = [-k, k]
            .into_iter()
            .map(|s| {
                let mut b = vec![0; m.dim()];
                b[i] = s;
                b[j] = -s;
                let t = MonomialElement::translation(b.clone());
                let conj = t.compose(m).compose(&t.inverse());
                (conj.origin_displacement(), b)
            })
            .max_by_key(|(d, _)| *d) // ties keep +k
            .expect("two signs");
        debug_assert!(best.0 >= 4 * k as u64);
        displacements.push(best.0);
        conjugators.push(best.1);
    }
    MonomialVerdict::Escaping {
        conjugators,
        displacements,
    }
}
