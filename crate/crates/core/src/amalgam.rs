//! Amalgam spaces `(L_w^{p(.)}, ℓ^q)` over the unit cells `J_k = [k, k+1)`.
//!
//! `‖f‖ = (∑_k ‖f χ_{J_k}‖_{L_w^{p(.)}}^q)^{1/q}`, with the supremum for
//! `q = ∞`. Region-restricted norms multiply `f` by the region indicator
//! inside every cell instead of dropping whole cells.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::lebesgue::{HolderCheck, LebesgueSpace, HOLDER_CONSTANT};
use crate::math;
use crate::numerics::{integrate_region, Interval, Region};

/// The global exponent `q ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GlobalExponent {
    Finite(f64),
    Infinity,
}

impl GlobalExponent {
    pub fn new(q: f64) -> Result<Self> {
        if q == f64::INFINITY {
            return Ok(GlobalExponent::Infinity);
        }
        if !(q >= 1.0) || !q.is_finite() {
            return Err(Error::InvalidParameter(
                "global exponent must lie in [1, inf]",
            ));
        }
        Ok(GlobalExponent::Finite(q))
    }

    /// `s = q/(q-1)`.
    pub fn conjugate(self) -> Self {
        match self {
            GlobalExponent::Infinity => GlobalExponent::Finite(1.0),
            GlobalExponent::Finite(1.0) => GlobalExponent::Infinity,
            GlobalExponent::Finite(q) => GlobalExponent::Finite(q / (q - 1.0)),
        }
    }

    /// ℓ^q aggregation in a fixed (ascending key) order.
    pub fn aggregate<I: IntoIterator<Item = f64>>(self, values: I) -> f64 {
        match self {
            GlobalExponent::Infinity => values.into_iter().fold(0.0, f64::max),
            GlobalExponent::Finite(1.0) => values.into_iter().sum(),
            GlobalExponent::Finite(q) => {
                // Scaled by the largest entry so large q cannot underflow.
                let values: Vec<f64> = values.into_iter().collect();
                let top = values.iter().copied().fold(0.0, f64::max);
                if !(top > 0.0) || !top.is_finite() {
                    return top;
                }
                let s: f64 = values.iter().map(|v| math::powf(v / top, q)).sum();
                top * math::powf(s, 1.0 / q)
            }
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            GlobalExponent::Finite(q) => q,
            GlobalExponent::Infinity => f64::INFINITY,
        }
    }
}

/// Per-cell local norms `k ↦ ‖f χ_{J_k}‖`; cells with zero norm are omitted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CellProfile {
    pub norms: BTreeMap<i64, f64>,
}

impl CellProfile {
    pub fn get(&self, k: i64) -> f64 {
        self.norms.get(&k).copied().unwrap_or(0.0)
    }

    pub fn aggregate(&self, q: GlobalExponent) -> f64 {
        q.aggregate(self.norms.values().copied())
    }
}

/// Outcome of `‖g‖_{(L,ℓ^q)} ≤ |S(K)|^{1/q} ‖g‖_{L_w^{p(.)}}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportBound {
    pub lhs: f64,
    pub rhs: f64,
    pub cells: usize,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct AmalgamSpace {
    local: LebesgueSpace,
    q: GlobalExponent,
}

impl AmalgamSpace {
    pub fn new(local: LebesgueSpace, q: GlobalExponent) -> Self {
        Self { local, q }
    }

    pub fn local(&self) -> &LebesgueSpace {
        &self.local
    }

    pub fn q(&self) -> GlobalExponent {
        self.q
    }

    /// Indices `[k_min, k_max]` of the cells meeting the truncation window.
    pub fn cell_range(&self) -> (i64, i64) {
        let t = self.local.truncation();
        (math::floor(t.lo()) as i64, math::ceil(t.hi()) as i64 - 1)
    }

    pub fn cell_norms(&self, f: &RealFunction) -> Result<CellProfile> {
        self.cell_norms_on(f, &Region::from(self.local.truncation()))
    }

    /// Cell norms of `f · 1_region`.
    pub fn cell_norms_on(&self, f: &RealFunction, region: &Region) -> Result<CellProfile> {
        let mut window = self.local.truncation();
        match f.support() {
            Some(s) if s.is_degenerate() => return Ok(CellProfile::default()),
            Some(s) => match window.intersect(&s) {
                Some(w) => window = w,
                None => return Ok(CellProfile::default()),
            },
            None => {}
        }
        let region = region.intersect_interval(&window);
        let mut norms = BTreeMap::new();
        let (k_lo, k_hi) = (
            math::floor(window.lo()) as i64,
            math::ceil(window.hi()) as i64 - 1,
        );
        for k in k_lo..=k_hi {
            let cell = Interval::new(k as f64, k as f64 + 1.0)?;
            let piece = region.intersect_interval(&cell);
            if piece.is_empty() {
                continue;
            }
            let n = self.local.norm_on(f, &piece)?;
            if n > 0.0 {
                norms.insert(k, n);
            }
        }
        Ok(CellProfile { norms })
    }

    pub fn norm(&self, f: &RealFunction) -> Result<f64> {
        Ok(self.cell_norms(f)?.aggregate(self.q))
    }

    pub fn norm_on(&self, f: &RealFunction, region: &Region) -> Result<f64> {
        Ok(self.cell_norms_on(f, region)?.aggregate(self.q))
    }

    /// `‖f‖_{(L_w^{p(.)}, ℓ^q)(|x| > γ)}`.
    pub fn tail_norm(&self, f: &RealFunction, gamma: f64) -> Result<f64> {
        self.norm_on(f, &Region::outside(gamma, self.local.truncation()))
    }

    /// `(L_{w*}^{r(.)}, ℓ^s)` with `r = p'`, `s = q'`.
    pub fn dual(&self) -> Result<AmalgamSpace> {
        Ok(AmalgamSpace {
            local: self.local.dual()?,
            q: self.q.conjugate(),
        })
    }

    /// `‖g‖ ≤ |S(K)|^{1/q} ‖g‖_{L_w^{p(.)}}` (`|S(K)|` itself for `q = ∞`)
    /// with `K` the support hint of `g`.
    pub fn support_bound_check(&self, g: &RealFunction) -> Result<SupportBound> {
        let k = g.support().ok_or(Error::MissingSupport)?;
        let cells = support_cell_count(k);
        let lhs = self.norm(g)?;
        let local = self.local.norm(g)?;
        let factor = match self.q {
            GlobalExponent::Infinity => cells as f64,
            GlobalExponent::Finite(q) => math::powf(cells as f64, 1.0 / q),
        };
        let rhs = factor * local;
        Ok(SupportBound {
            lhs,
            rhs,
            cells,
            holds: lhs <= rhs + 1e-9,
        })
    }

    /// `∑_k ‖fg χ_{J_k}‖_{L¹} ≤ 2 ‖f‖ ‖g‖_{dual}`.
    pub fn holder(&self, f: &RealFunction, g: &RealFunction) -> Result<HolderCheck> {
        let dual = self.dual()?;
        let prod = f.mul(g);
        let region = match prod.support() {
            Some(s) if s.is_degenerate() => Region::empty(),
            Some(s) => Region::from(self.local.truncation()).intersect_interval(&s),
            None => Region::from(self.local.truncation()),
        };
        let quad = *self.local.quadrature();
        let marks = prod.landmarks().merge(self.local.weight().landmarks());
        let lhs = integrate_region(|x| math::abs(prod.eval(x)), &region, &marks, &quad)?;
        let rhs_bound = HOLDER_CONSTANT * self.norm(f)? * dual.norm(g)?;
        Ok(HolderCheck {
            lhs,
            rhs_bound,
            holds: lhs <= rhs_bound + 1e-9,
        })
    }

    /// The components `(k, f χ_{J_k})` of the isometry onto
    /// `ℓ^q(L_w^{p(.)}(J_k))`, for cells with nonzero norm.
    pub fn isometry_view(&self, f: &RealFunction) -> Result<Vec<(i64, RealFunction, f64)>> {
        let profile = self.cell_norms(f)?;
        profile
            .norms
            .iter()
            .map(|(&k, &n)| {
                let cell = Interval::new(k as f64, k as f64 + 1.0)?;
                Ok((k, f.restrict(cell), n))
            })
            .collect()
    }
}

/// `|S(K)|`, the number of cells `[k, k+1)` meeting `K = [lo, hi)`; a
/// degenerate `K` meets exactly one cell.
pub fn support_cell_count(k: Interval) -> usize {
    if k.is_degenerate() {
        return 1;
    }
    (math::ceil(k.hi()) - math::floor(k.lo())) as usize
}
