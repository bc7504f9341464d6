use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::IntPoly;

/// Monic characteristic polynomial `det(λI - A)` with exact integer
/// coefficients.
///
/// The alternative sign convention `det(A - λI)` differs by `(-1)^n`; see
/// [`CharPoly::signed_convention`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharPoly {
    poly: IntPoly,
}

impl CharPoly {
    pub fn new(poly: IntPoly) -> Result<Self> {
        if !poly.is_monic() {
            return Err(Error::InvalidParameter(
                "characteristic polynomial must be monic".into(),
            ));
        }
        Ok(Self { poly })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn into_poly(self) -> IntPoly {
        self.poly
    }

    /// Ascending coefficients, length `degree + 1`.
    pub fn coeffs(&self) -> &[BigInt] {
        self.poly.coeffs()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    /// `det(A - λI) = (-1)^n det(λI - A)`.
    pub fn signed_convention(&self) -> IntPoly {
        if self.degree() % 2 == 0 {
            self.poly.clone()
        } else {
            -&self.poly
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.poly.eval(x)
    }

    /// Coefficient of `λ^(n-1)`, which is minus the trace of `A`.
    pub fn trace_coefficient(&self) -> BigInt {
        match self.degree() {
            0 => BigInt::zero(),
            d => self.poly.coeff(d - 1),
        }
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Exact characteristic polynomial of the adjacency matrix.
///
/// Berkowitz's division-free recurrence: the coefficient vector of each
/// leading principal submatrix is a lower-triangular Toeplitz matrix times
/// the vector of the previous one. `O(n^4)` big-integer operations.
/// The null graph yields the constant polynomial 1.
pub fn char_poly(g: &Graph) -> CharPoly {
    let n = g.n();
    let a: Vec<Vec<BigInt>> = {
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for &(u, v) in g.edges() {
            m[u][v] = BigInt::one();
            m[v][u] = BigInt::one();
        }
        m
    };
    CharPoly {
        poly: berkowitz(&a),
    }
}

/// Characteristic polynomial `det(λI - M)` of a square integer matrix.
pub fn berkowitz(m: &[Vec<BigInt>]) -> IntPoly {
    let n = m.len();
    // Descending coefficients of the current principal block.
    let mut v: Vec<BigInt> = vec![BigInt::one()];
    for r in 0..n {
        // Block is m[0..r][0..r]; new row/column index r.
        let col: Vec<BigInt> = (0..r).map(|i| m[i][r].clone()).collect();
        let row: &[BigInt] = &m[r][..r];
        // Toeplitz first column: 1, -m_rr, -R C, -R M C, ..., -R M^(r-2) C.
        let mut t = Vec::with_capacity(r + 2);
        t.push(BigInt::one());
        t.push(-m[r][r].clone());
        let mut w = col;
        for _ in 0..r {
            let dot: BigInt = row.iter().zip(&w).map(|(a, b)| a * b).sum();
            t.push(-dot);
            w = (0..r)
                .map(|i| m[i][..r].iter().zip(&w).map(|(a, b)| a * b).sum())
                .collect();
        }
        // (r + 2) x (r + 1) lower-triangular Toeplitz product.
        let next: Vec<BigInt> = (0..r + 2)
            .map(|i| {
                (0..=i.min(r))
                    .map(|j| &t[i - j] * &v[j])
                    .sum()
            })
            .collect();
        v = next;
    }
    v.reverse();
    IntPoly::from_coeffs(v)
}
