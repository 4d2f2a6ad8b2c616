//! Structure constants of finite-dimensional real Lie algebras, their Killing
//! forms, and a small catalog of named algebras.
//!
//! Storage convention: `c[(C, A, B)] = c^C_{AB}` with `[T_A, T_B] = c^C_{AB} T_C`.

use alloc::string::{String, ToString};

use crate::error::{Error, Result};
use crate::math;
use crate::tensor::{SquareMatrix, Tensor3, MAX_DIM};

/// Default tolerance on `|det η|` for semisimplicity.
pub const SEMISIMPLE_TOL: f64 = 1e-9;

/// Jacobi residual accepted by frame constructors.
pub const JACOBI_TOL: f64 = 1e-12;

const FORM_SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    c: Tensor3,
}

impl StructureConstants {
    /// Wraps `c^C_{AB}`; antisymmetry in `A, B` must hold exactly.
    pub fn new(c: Tensor3) -> Result<Self> {
        if c.last_pair_asymmetry() != 0.0 {
            return Err(Error::NotAntisymmetric);
        }
        Ok(StructureConstants { c })
    }

    /// Builds from brackets `[T_a, T_b] = Σ value·T_c`, given as
    /// `(a, b, c, value)`; the antisymmetric partner is filled in.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, usize, f64)]) -> Self {
        let mut c = Tensor3::zeros(dim);
        for &(a, b, target, v) in brackets {
            c[(target, a, b)] += v;
            c[(target, b, a)] -= v;
        }
        StructureConstants { c }
    }

    pub fn abelian(dim: usize) -> Self {
        StructureConstants { c: Tensor3::zeros(dim) }
    }

    /// `[X, Y] = Z`.
    pub fn heisenberg3() -> Self {
        Self::from_brackets(3, &[(0, 1, 2, 1.0)])
    }

    /// `c^C_{AB} = ε_{CAB}`.
    pub fn su2() -> Self {
        Self::from_brackets(3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)])
    }

    /// Same constants as [`Self::su2`]; the algebras are isomorphic.
    pub fn so3() -> Self {
        Self::su2()
    }

    /// Basis `(H, E, F)` with `[H,E] = 2E`, `[H,F] = -2F`, `[E,F] = H`.
    pub fn sl2r() -> Self {
        Self::from_brackets(3, &[(0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0)])
    }

    /// Block direct sum; `other`'s basis follows `self`'s.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let (n, m) = (self.dim(), other.dim());
        if n + m > MAX_DIM {
            return Err(Error::InvalidParameter("direct sum exceeds the dimension cap"));
        }
        let c = Tensor3::from_fn(n + m, |k, a, b| {
            if k < n && a < n && b < n {
                self.c[(k, a, b)]
            } else if k >= n && a >= n && b >= n {
                other.c[(k - n, a - n, b - n)]
            } else {
                0.0
            }
        });
        Ok(StructureConstants { c })
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn constants(&self) -> &Tensor3 {
        &self.c
    }

    /// `c^C_{AB}`.
    #[inline]
    pub fn get(&self, upper: usize, a: usize, b: usize) -> f64 {
        self.c[(upper, a, b)]
    }

    /// Matrix of `ad_x`: `(ad_x)^C_B = x^A c^C_{AB}`.
    pub fn ad_matrix(&self, x: &[f64]) -> SquareMatrix {
        let n = self.dim();
        SquareMatrix::from_fn(n, |c, b| (0..n).map(|a| x[a] * self.c[(c, a, b)]).sum())
    }
}

/// Symmetric bilinear form `η_AB` on the internal space.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm(SquareMatrix);

impl BilinearForm {
    pub fn new(m: SquareMatrix) -> Result<Self> {
        let asym = m.asymmetry();
        if asym > FORM_SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(BilinearForm(m))
    }

    pub fn minkowski(dim: usize) -> Self {
        let mut d = alloc::vec![-1.0; dim];
        d[0] = 1.0;
        BilinearForm(SquareMatrix::diag(&d))
    }

    pub fn identity(dim: usize) -> Self {
        BilinearForm(SquareMatrix::identity(dim))
    }

    /// Block form `diag(β) ⊕ spatial`.
    pub fn time_plus_spatial(beta: f64, spatial: &BilinearForm) -> Self {
        let n = spatial.dim() + 1;
        BilinearForm(SquareMatrix::from_fn(n, |a, b| match (a, b) {
            (0, 0) => beta,
            (0, _) | (_, 0) => 0.0,
            _ => spatial.0[(a - 1, b - 1)],
        }))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }
}

/// `max |Σ_E (c^E_{AB} c^D_{EC} + c^E_{BC} c^D_{EA} + c^E_{CA} c^D_{EB})|`.
pub fn jacobi_residual(sc: &StructureConstants) -> f64 {
    let n = sc.dim();
    let c = &sc.c;
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    let s: f64 = (0..n)
                        .map(|e| {
                            c[(e, a, b)] * c[(d, e, cc)] + c[(e, b, cc)] * c[(d, e, a)] + c[(e, cc, a)] * c[(d, e, b)]
                        })
                        .sum();
                    worst = worst.max(math::abs(s));
                }
            }
        }
    }
    worst
}

/// `η_AB = Σ_{C,D} c^C_{DA} c^D_{CB}`.
pub fn killing_form(sc: &StructureConstants) -> BilinearForm {
    let n = sc.dim();
    let c = &sc.c;
    let mut m = SquareMatrix::zeros(n);
    for a in 0..n {
        for b in a..n {
            let mut s = 0.0;
            for cc in 0..n {
                for d in 0..n {
                    s += c[(cc, d, a)] * c[(d, cc, b)];
                }
            }
            m[(a, b)] = s;
            m[(b, a)] = s;
        }
    }
    BilinearForm(m)
}

/// `|det η| > tol` for the Killing form `η`.
pub fn is_semisimple(sc: &StructureConstants, tol: f64) -> bool {
    math::abs(killing_form(sc).matrix().determinant()) > tol
}

/// `max |Σ_E (c^E_{DA} η_{EB} + c^E_{DB} η_{AE})|`; zero for ad-invariant forms.
pub fn ad_invariance_residual(sc: &StructureConstants, form: &BilinearForm) -> f64 {
    let n = sc.dim();
    let eta = form.matrix();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let s: f64 = (0..n)
                    .map(|e| sc.c[(e, d, a)] * eta[(e, b)] + sc.c[(e, d, b)] * eta[(a, e)])
                    .sum();
                worst = worst.max(math::abs(s));
            }
        }
    }
    worst
}

/// Adds a central generator with index `0`; the original algebra moves to
/// indices `1..=n`.
pub fn trivial_central_extension(sc: &StructureConstants) -> Result<StructureConstants> {
    let n = sc.dim() + 1;
    if n > MAX_DIM {
        return Err(Error::InvalidParameter("extension exceeds the dimension cap"));
    }
    let c = Tensor3::from_fn(n, |k, a, b| {
        if k == 0 || a == 0 || b == 0 {
            0.0
        } else {
            sc.c[(k - 1, a - 1, b - 1)]
        }
    });
    Ok(StructureConstants { c })
}

/// Names listed by the CLI catalog.
pub const CATALOG_NAMES: &[&str] = &["abelian(3)", "heisenberg3", "su2", "so3", "sl2r", "direct_sum(su2,su2)"];

/// Looks up `abelian(n)`, `heisenberg3`, `su2`, `so3`, `sl2r` or
/// `direct_sum(a,b)` (nestable).
pub fn catalog(name: &str) -> Result<StructureConstants> {
    let trimmed: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let unknown = || Error::UnknownAlgebra(name.to_string());
    match trimmed.as_str() {
        "heisenberg3" => return Ok(StructureConstants::heisenberg3()),
        "su2" => return Ok(StructureConstants::su2()),
        "so3" => return Ok(StructureConstants::so3()),
        "sl2r" => return Ok(StructureConstants::sl2r()),
        _ => {}
    }
    if let Some(arg) = call_argument(&trimmed, "abelian") {
        let n: usize = arg.parse().map_err(|_| unknown())?;
        if !(1..=MAX_DIM).contains(&n) {
            return Err(unknown());
        }
        return Ok(StructureConstants::abelian(n));
    }
    if let Some(arg) = call_argument(&trimmed, "direct_sum") {
        let (left, right) = split_top_level(arg).ok_or_else(unknown)?;
        let a = catalog(left)?;
        let b = catalog(right)?;
        return a.direct_sum(&b).map_err(|_| unknown());
    }
    Err(unknown())
}

fn call_argument<'a>(s: &'a str, head: &str) -> Option<&'a str> {
    s.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')
}

fn split_top_level(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

/// One catalog row: name, dimension, semisimplicity, Killing signature.
pub fn describe(name: &str) -> Result<(usize, bool, crate::tensor::Signature)> {
    let sc = catalog(name)?;
    let eta = killing_form(&sc);
    let sig = eta.matrix().signature(crate::tensor::DEFAULT_ZERO_TOL)?;
    Ok((sc.dim(), is_semisimple(&sc, SEMISIMPLE_TOL), sig))
}
