//! Deterministic generators for the four benchmark matrix classes.
//!
//! Every generator is a pure function of its [`MatrixSpec`]: the same spec
//! yields a bit-identical matrix on every run and platform (the generators
//! use the counter-based RNG and portable elementary functions only).
//!
//! - `default`: `X = U Σ_t Vᵀ` with seeded orthonormal factors and singular
//!   values logarithmically equispaced on `[10^-t, 1]`, so `κ(X) ≈ 10^t`.
//! - `glued`: a default matrix whose blocks are rescaled by `Σ_r Ṽ`, built
//!   to break classical Gram-Schmidt.
//! - `monomial`: blocks `[v, A v, …, A^{t-1} v]` for a fixed diagonal
//!   operator, a Krylov-like basis whose conditioning grows with `t`.
//! - `piled`: blocks accumulate (`X_k = X_{k-1} + Z_k`), so later blocks
//!   share content with earlier ones.

use std::fmt;

use crate::bgs::BlockMatrix;
use crate::linalg::{householder_qr, matmul, Matrix, Trans};
use crate::pmath;
use crate::rng::CounterRng;

/// The four generator classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixClass {
    Default,
    Glued,
    Monomial,
    Piled,
}

impl MatrixClass {
    pub fn name(self) -> &'static str {
        match self {
            MatrixClass::Default => "default",
            MatrixClass::Glued => "glued",
            MatrixClass::Monomial => "monomial",
            MatrixClass::Piled => "piled",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "default" => Some(MatrixClass::Default),
            "glued" => Some(MatrixClass::Glued),
            "monomial" => Some(MatrixClass::Monomial),
            "piled" => Some(MatrixClass::Piled),
            _ => None,
        }
    }
}

impl fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Class-specific conditioning knobs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Knobs {
    Default { t: f64 },
    Glued { t1: f64, t2: f64 },
    Monomial { r: usize, t: usize },
    Piled { t1: f64, t2: f64 },
}

impl Knobs {
    pub fn class(&self) -> MatrixClass {
        match self {
            Knobs::Default { .. } => MatrixClass::Default,
            Knobs::Glued { .. } => MatrixClass::Glued,
            Knobs::Monomial { .. } => MatrixClass::Monomial,
            Knobs::Piled { .. } => MatrixClass::Piled,
        }
    }

    /// Compact `name=value` rendering used in CSV output and reports.
    pub fn label(&self) -> String {
        match self {
            Knobs::Default { t } => format!("t={t}"),
            Knobs::Glued { t1, t2 } => format!("t1={t1};t2={t2}"),
            Knobs::Monomial { r, t } => format!("r={r};t={t}"),
            Knobs::Piled { t1, t2 } => format!("t1={t1};t2={t2}"),
        }
    }
}

/// Parameterized description of one test matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixSpec {
    pub m: usize,
    pub p: usize,
    pub s: usize,
    pub knobs: Knobs,
    pub seed: u64,
}

/// Validation error for a [`MatrixSpec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecError {
    NonPositiveDims,
    PartitionTooWide { m: usize, p: usize, s: usize },
    NegativeKnob,
    MonomialShape { r: usize, t: usize, p: usize, s: usize },
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::NonPositiveDims => f.write_str("m, p, s must all be positive"),
            SpecError::PartitionTooWide { m, p, s } => {
                write!(f, "p*s = {} exceeds m = {m} (matrix must be tall)", p * s)
            }
            SpecError::NegativeKnob => f.write_str("conditioning knobs must be nonnegative"),
            SpecError::MonomialShape { r, t, p, s } => write!(
                f,
                "monomial requires r*t == p*s (got r={r}, t={t}, p={p}, s={s})"
            ),
        }
    }
}

impl std::error::Error for SpecError {}

impl MatrixSpec {
    pub fn class(&self) -> MatrixClass {
        self.knobs.class()
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.m == 0 || self.p == 0 || self.s == 0 {
            return Err(SpecError::NonPositiveDims);
        }
        if self.p * self.s > self.m {
            return Err(SpecError::PartitionTooWide {
                m: self.m,
                p: self.p,
                s: self.s,
            });
        }
        match self.knobs {
            Knobs::Default { t } => {
                if t < 0.0 {
                    return Err(SpecError::NegativeKnob);
                }
            }
            Knobs::Glued { t1, t2 } | Knobs::Piled { t1, t2 } => {
                if t1 < 0.0 || t2 < 0.0 {
                    return Err(SpecError::NegativeKnob);
                }
            }
            Knobs::Monomial { r, t } => {
                if r == 0 || t == 0 {
                    return Err(SpecError::NonPositiveDims);
                }
                if r * t != self.p * self.s {
                    return Err(SpecError::MonomialShape {
                        r,
                        t,
                        p: self.p,
                        s: self.s,
                    });
                }
            }
        }
        Ok(())
    }

    /// Generate the matrix. A pure function of this value: outputs are
    /// bit-identical across runs and platforms.
    pub fn generate(&self) -> Result<BlockMatrix<f64>, SpecError> {
        self.validate()?;
        let rng = CounterRng::new(self.seed);
        let data = match self.knobs {
            Knobs::Default { t } => gen_default(self.m, self.p * self.s, t, &rng),
            Knobs::Glued { t1, t2 } => gen_glued(self.m, self.p, self.s, t1, t2, &rng),
            Knobs::Monomial { r, t } => gen_monomial(self.m, r, t, &rng),
            Knobs::Piled { t1, t2 } => gen_piled(self.m, self.p, self.s, t1, t2, &rng),
        };
        Ok(BlockMatrix::new(data, self.p, self.s).expect("validated partition"))
    }
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut CounterRng) -> Matrix<f64> {
    let mut m = Matrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = rng.next_gaussian();
        }
    }
    m
}

/// Orthonormal `rows x cols` factor from the QR of a seeded Gaussian matrix.
fn random_orthonormal(rows: usize, cols: usize, rng: &mut CounterRng) -> Matrix<f64> {
    householder_qr(&gaussian_matrix(rows, cols, rng)).q
}

/// `n` values logarithmically equispaced on `[10^-t, 1]`, endpoints included.
fn log_spaced(n: usize, t: f64) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| pmath::pow10(-t * i as f64 / (n - 1) as f64))
        .collect()
}

fn gen_default(m: usize, n: usize, t: f64, rng: &CounterRng) -> Matrix<f64> {
    let u = random_orthonormal(m, n, &mut rng.split(1));
    let v = random_orthonormal(n, n, &mut rng.split(2));
    let sigma = log_spaced(n, t);
    let mut us = u;
    for (j, &sj) in sigma.iter().enumerate() {
        for x in us.column_mut(j) {
            *x *= sj;
        }
    }
    matmul(&us, Trans::No, &v, Trans::Yes)
}

fn gen_glued(m: usize, p: usize, s: usize, t1: f64, t2: f64, rng: &CounterRng) -> Matrix<f64> {
    let mut x = gen_default(m, p * s, t1, &rng.split(1));
    let sigma_r = log_spaced(s, t2);
    for k in 0..p {
        // Fresh orthonormal factor per block; the scaling is shared.
        let vt = random_orthonormal(s, s, &mut rng.split(1000 + k as u64));
        let mut mult = vt;
        for i in 0..s {
            for j in 0..s {
                mult[(i, j)] *= sigma_r[i];
            }
        }
        let blk = x.columns(k * s, (k + 1) * s);
        x.set_columns(k * s, &matmul(&blk, Trans::No, &mult, Trans::No));
    }
    x
}

fn gen_monomial(m: usize, r: usize, t: usize, rng: &CounterRng) -> Matrix<f64> {
    // Diagonal operator with eigenvalues evenly distributed in (0.1, 10).
    let eig: Vec<f64> = (0..m)
        .map(|i| 0.1 + 9.9 * (i as f64 + 0.5) / m as f64)
        .collect();
    let mut x = Matrix::zeros(m, r * t);
    for k in 0..r {
        let mut block_rng = rng.split(2000 + k as u64);
        let mut v: Vec<f64> = (0..m).map(|_| block_rng.next_f64()).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        for a in &mut v {
            *a /= norm;
        }
        for j in 0..t {
            for i in 0..m {
                x[(i, k * t + j)] = v[i];
            }
            if j + 1 < t {
                for i in 0..m {
                    v[i] *= eig[i];
                }
            }
        }
    }
    x
}

fn gen_piled(m: usize, p: usize, s: usize, t1: f64, t2: f64, rng: &CounterRng) -> Matrix<f64> {
    let mut x = Matrix::zeros(m, p * s);
    let first = gen_default(m, s, t1, &rng.split(1));
    x.set_columns(0, &first);
    let mut prev = first;
    for k in 1..p {
        let z = gen_default(m, s, t2, &rng.split(100 + k as u64));
        let mut next = prev.clone();
        for j in 0..s {
            for i in 0..m {
                next[(i, j)] += z[(i, j)];
            }
        }
        x.set_columns(k * s, &next);
        prev = next;
    }
    x
}
