use serde::Serialize;

use super::{forward_index, scale_newton, Automorphism, ScaleValue};
use crate::error::Result;
use crate::exactnum::Valuation;
use crate::lattice::Lattice;

/// A candidate minimizing lattice for `<g>` with the indices that certify it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TidyCertificate {
    pub lattice: Lattice,
    /// exponent of `[gO : gO ∩ O]`
    pub fwd_index_exp: u64,
    /// exponent of `[g^-1 O : g^-1 O ∩ O]`
    pub bwd_index_exp: u64,
    pub scale_fwd: ScaleValue,
    pub scale_bwd: ScaleValue,
    pub certified: bool,
    /// iteration that produced `lattice`
    pub steps: usize,
}

impl TidyCertificate {
    pub fn displacement(&self) -> u64 {
        self.fwd_index_exp + self.bwd_index_exp
    }
}

/// `n (1 + max |v(c_i)|)` over the nonzero coefficients of the
/// characteristic polynomial.
pub fn default_max_steps(g: &Automorphism) -> usize {
    let worst = g
        .matrix()
        .char_poly()
        .iter()
        .filter_map(|c| match c.val(g.prime()) {
            Valuation::Finite(v) => Some(v.unsigned_abs() as usize),
            Valuation::Infinite => None,
        })
        .max()
        .unwrap_or(0);
    g.dim() * (1 + worst)
}

/// True when `g` and `g^-1` both attain their scales at `l`.
pub fn is_minimizing(g: &Automorphism, l: &Lattice) -> Result<bool> {
    Ok(forward_index(g, l)? == scale_newton(g).exponent
        && forward_index(&g.inv(), l)? == scale_newton(&g.inv()).exponent)
}

/// Searches for a lattice minimizing for `<g>` among
/// `O_m = (∩_{k≤m} g^k Z_p^n) + (∩_{k≤m} g^-k Z_p^n)`, `m = 1..=max_steps`.
///
/// Returns the first certified `O_m`, or the candidate with the smallest
/// displacement (earliest on ties) with `certified = false`.
pub fn tidy_for_cyclic(g: &Automorphism, max_steps: usize) -> Result<TidyCertificate> {
    let max_steps = max_steps.max(1);
    let std = Lattice::standard(g.dim(), g.prime());
    let ginv = g.inv();
    let scale_fwd = scale_newton(g);
    let scale_bwd = scale_newton(&ginv);

    let (mut fwd_image, mut bwd_image) = (std.clone(), std.clone());
    let (mut fwd_meet, mut bwd_meet) = (std.clone(), std.clone());
    let mut best: Option<TidyCertificate> = None;
    for m in 1..=max_steps {
        fwd_image = g.apply(&fwd_image)?;
        bwd_image = ginv.apply(&bwd_image)?;
        fwd_meet = fwd_meet.meet(&fwd_image)?;
        bwd_meet = bwd_meet.meet(&bwd_image)?;
        let lattice = fwd_meet.join(&bwd_meet)?;
        let fwd_index_exp = forward_index(g, &lattice)?;
        let bwd_index_exp = forward_index(&ginv, &lattice)?;
        let certified = fwd_index_exp == scale_fwd.exponent && bwd_index_exp == scale_bwd.exponent;
        let cert = TidyCertificate {
            lattice,
            fwd_index_exp,
            bwd_index_exp,
            scale_fwd,
            scale_bwd,
            certified,
            steps: m,
        };
        if certified {
            return Ok(cert);
        }
        if best.as_ref().is_none_or(|b| cert.displacement() < b.displacement()) {
            best = Some(cert);
        }
    }
    Ok(best.expect("at least one step"))
}
