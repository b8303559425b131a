//! The six block Gram-Schmidt algorithms, instrumented with structural
//! sync-point counting.
//!
//! All variants build on the Pythagorean update: the diagonal block of `R`
//! is the Cholesky factor of `XₖᵀXₖ - (QᵀXₖ)ᵀ(QᵀXₖ)`, formed by the
//! non-halting Cholesky so breakdown surfaces as NaN instead of an error.
//! The uniform-precision family:
//!
//! - [`bcgs_pip`]: one fused block inner product per iteration, `p` sync
//!   points, loss of orthogonality `O(ε)κ²(X)`.
//! - [`bcgs_pip_plus`]: the full procedure run twice (`2p` sync points),
//!   `O(ε)` loss of orthogonality.
//! - [`bcgs_pipi_plus`]: both passes fused into one loop (`2p - 1` sync
//!   points); requires an unconditionally stable intraorthogonalization
//!   because the first block is never reorthogonalized.
//!
//! Each has a two-precision counterpart (`*_mp`) where inner products of a
//! block with itself, Cholesky factorizations, and the local triangular
//! solves run in the high precision while stored data stays in the low
//! precision. A degenerate pair (P, P) makes the `*_mp` variant bit-identical
//! to its uniform counterpart.
//!
//! Sync points are counted structurally: each block inner product and each
//! intraorthogonalization is one sync point, and the split low/high inner
//! product of the two-precision variants still counts as a single one (the
//! synchronization moves both payloads at once).

use std::fmt;
use std::time::Instant;

use crate::intraorth::{intraorthogonalize, IntraorthId};
use crate::linalg::{cholesky_nonstop, matmul, tri_solve_right, Matrix, Trans, UpperTriangular};
use crate::precision::{ConvertFrom, PrecisionId, PrecisionPair, Scalar};

/// A dense `m x (p*s)` matrix with an explicit block partition: `p` block
/// vectors of `s` columns each. Always tall-skinny (`p*s <= m`).
#[derive(Clone, Debug)]
pub struct BlockMatrix<T> {
    data: Matrix<T>,
    p: usize,
    s: usize,
}

/// Error for a block partition that does not fit the matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockShapeError {
    pub rows: usize,
    pub cols: usize,
    pub p: usize,
    pub s: usize,
}

impl fmt::Display for BlockShapeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "block partition p={} s={} does not fit a {}x{} matrix (need p*s == cols and p*s <= rows)",
            self.p, self.s, self.rows, self.cols
        )
    }
}

impl std::error::Error for BlockShapeError {}

impl<T: Scalar> BlockMatrix<T> {
    pub fn new(data: Matrix<T>, p: usize, s: usize) -> Result<Self, BlockShapeError> {
        if p >= 1 && s >= 1 && p * s == data.cols() && p * s <= data.rows() {
            Ok(BlockMatrix { data, p, s })
        } else {
            Err(BlockShapeError {
                rows: data.rows(),
                cols: data.cols(),
                p,
                s,
            })
        }
    }

    pub fn m(&self) -> usize {
        self.data.rows()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn data(&self) -> &Matrix<T> {
        &self.data
    }

    pub fn into_data(self) -> Matrix<T> {
        self.data
    }

    /// Copy of block vector `k` (columns `k*s .. (k+1)*s`).
    pub fn block(&self, k: usize) -> Matrix<T> {
        assert!(k < self.p);
        self.data.columns(k * self.s, (k + 1) * self.s)
    }

    /// The concatenation of the first `k` blocks as its own block matrix.
    pub fn prefix(&self, k: usize) -> BlockMatrix<T> {
        assert!(k >= 1 && k <= self.p);
        BlockMatrix {
            data: self.data.columns(0, k * self.s),
            p: k,
            s: self.s,
        }
    }

    /// Same columns under a different partition width.
    pub fn repartition(&self, s: usize) -> Result<BlockMatrix<T>, BlockShapeError> {
        let n = self.p * self.s;
        if s >= 1 && n.is_multiple_of(s) {
            BlockMatrix::new(self.data.clone(), n / s, s)
        } else {
            Err(BlockShapeError {
                rows: self.data.rows(),
                cols: n,
                p: 0,
                s,
            })
        }
    }

    pub fn convert<U: Scalar + ConvertFrom<T>>(&self) -> BlockMatrix<U> {
        BlockMatrix {
            data: self.data.convert::<U>(),
            p: self.p,
            s: self.s,
        }
    }
}

/// Factors produced by a block Gram-Schmidt run: orthonormal `q` and upper
/// triangular `r` with the block partition of the input.
#[derive(Clone, Debug)]
pub struct BlockQr<T> {
    pub q: Matrix<T>,
    pub r: UpperTriangular<T>,
}

impl<T: Scalar> BlockQr<T> {
    pub fn convert<U: Scalar + ConvertFrom<T>>(&self) -> BlockQr<U> {
        BlockQr {
            q: self.q.convert::<U>(),
            r: self.r.convert::<U>(),
        }
    }
}

/// Instrumentation from one algorithm invocation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunStats {
    /// Structural sync-point count (block inner products plus
    /// intraorthogonalizations).
    pub sync_points: usize,
    /// True when any entry of the returned factors is NaN or infinite,
    /// the breakdown signal of the non-halting Cholesky.
    pub had_nan: bool,
    /// Wall-clock seconds for this invocation.
    pub wall_time: f64,
}

impl RunStats {
    pub fn sync_count(&self) -> usize {
        self.sync_points
    }
}

/// Identifier for the six shipped algorithms (the configuration-file names).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgorithmId {
    Pip,
    PipPlus,
    PipiPlus,
    PipMp,
    PipPlusMp,
    PipiPlusMp,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 6] = [
        AlgorithmId::Pip,
        AlgorithmId::PipPlus,
        AlgorithmId::PipiPlus,
        AlgorithmId::PipMp,
        AlgorithmId::PipPlusMp,
        AlgorithmId::PipiPlusMp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::Pip => "BCGS_PIP",
            AlgorithmId::PipPlus => "BCGS_PIP+",
            AlgorithmId::PipiPlus => "BCGS_PIPI+",
            AlgorithmId::PipMp => "BCGS_PIP_MP",
            AlgorithmId::PipPlusMp => "BCGS_PIP+_MP",
            AlgorithmId::PipiPlusMp => "BCGS_PIPI+_MP",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }

    pub fn is_mixed_precision(self) -> bool {
        matches!(
            self,
            AlgorithmId::PipMp | AlgorithmId::PipPlusMp | AlgorithmId::PipiPlusMp
        )
    }

    /// Closed-form sync count for a run over `p` blocks.
    pub fn expected_sync_points(self, p: usize) -> usize {
        match self {
            AlgorithmId::Pip | AlgorithmId::PipMp => p,
            AlgorithmId::PipPlus | AlgorithmId::PipPlusMp => 2 * p,
            AlgorithmId::PipiPlus | AlgorithmId::PipiPlusMp => 2 * p - 1,
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Write `src` into `dst` with its top-left corner at `(row0, col0)`.
fn paste<T: Scalar>(dst: &mut Matrix<T>, row0: usize, col0: usize, src: &Matrix<T>) {
    for j in 0..src.cols() {
        for i in 0..src.rows() {
            dst[(row0 + i, col0 + j)] = src[(i, j)];
        }
    }
}

fn finish<T: Scalar>(
    q: Matrix<T>,
    r: Matrix<T>,
    sync_points: usize,
    start: Instant,
) -> (BlockQr<T>, RunStats) {
    let had_nan = q.has_non_finite() || r.has_non_finite();
    let factors = BlockQr {
        q,
        r: UpperTriangular::new(r),
    };
    (
        factors,
        RunStats {
            sync_points,
            had_nan,
            wall_time: start.elapsed().as_secs_f64(),
        },
    )
}

// ---------------------------------------------------------------------------
// Uniform-precision algorithms
// ---------------------------------------------------------------------------

/// Block classical Gram-Schmidt with the Pythagorean diagonal update.
///
/// One intraorthogonalization plus one fused block inner product per
/// remaining block: `p` sync points in total.
pub fn bcgs_pip<T: Scalar>(x: &BlockMatrix<T>, io: IntraorthId) -> (BlockQr<T>, RunStats) {
    let start = Instant::now();
    let (m, p, s) = (x.m(), x.p(), x.s());
    let n = p * s;
    let mut q = Matrix::zeros(m, n);
    let mut r = Matrix::zeros(n, n);
    let mut sync = 0usize;

    let f = intraorthogonalize(&x.block(0), io);
    sync += 1;
    q.set_columns(0, &f.q);
    paste(&mut r, 0, 0, f.r.as_matrix());

    for k in 1..p {
        let xk = x.block(k);
        let qprev = q.columns(0, k * s);
        // Fused inner product [Q_{k-1}  X_k]ᵀ X_k: one sync point.
        let rcol = matmul(&qprev, Trans::Yes, &xk, Trans::No);
        let pk = matmul(&xk, Trans::Yes, &xk, Trans::No);
        sync += 1;
        let rtr = matmul(&rcol, Trans::Yes, &rcol, Trans::No);
        let rkk = cholesky_nonstop(&pk.sub(&rtr).symmetrize());
        let v = xk.sub(&matmul(&qprev, Trans::No, &rcol, Trans::No));
        let qk = tri_solve_right(&v, &rkk);
        q.set_columns(k * s, &qk);
        paste(&mut r, 0, k * s, &rcol);
        paste(&mut r, k * s, k * s, rkk.as_matrix());
    }
    finish(q, r, sync, start)
}

/// Reorthogonalized variant: the full procedure applied twice, `R = T S`.
///
/// `2p` sync points. The intermediate basis lives in the workspace of the
/// first pass and is consumed by the second, so only one basis is stored.
pub fn bcgs_pip_plus<T: Scalar>(x: &BlockMatrix<T>, io: IntraorthId) -> (BlockQr<T>, RunStats) {
    let start = Instant::now();
    let (p, s) = (x.p(), x.s());
    let (first, st1) = bcgs_pip(x, io);
    let u = BlockMatrix {
        data: first.q,
        p,
        s,
    };
    let s_factor = first.r;
    let (second, st2) = bcgs_pip(&u, io);
    let r = matmul(
        second.r.as_matrix(),
        Trans::No,
        s_factor.as_matrix(),
        Trans::No,
    );
    finish(second.q, r, st1.sync_points + st2.sync_points, start)
}

/// Inner-reorthogonalized variant: both passes fused into a single loop.
///
/// `2p - 1` sync points. The first block is orthogonalized only once, so the
/// intraorthogonalization itself must deliver `O(ε)` orthogonality for the
/// overall bound to hold (HouseQR does; CholQR does not).
pub fn bcgs_pipi_plus<T: Scalar>(x: &BlockMatrix<T>, io: IntraorthId) -> (BlockQr<T>, RunStats) {
    let start = Instant::now();
    let (m, p, s) = (x.m(), x.p(), x.s());
    let n = p * s;
    let mut q = Matrix::zeros(m, n);
    let mut r = Matrix::zeros(n, n);
    let mut sync = 0usize;

    let f = intraorthogonalize(&x.block(0), io);
    sync += 1;
    q.set_columns(0, &f.q);
    paste(&mut r, 0, 0, f.r.as_matrix());

    for k in 1..p {
        let xk = x.block(k);
        let qprev = q.columns(0, k * s);

        // First Pythagorean step.
        let scol = matmul(&qprev, Trans::Yes, &xk, Trans::No);
        let omega = matmul(&xk, Trans::Yes, &xk, Trans::No);
        sync += 1;
        let sts = matmul(&scol, Trans::Yes, &scol, Trans::No);
        let skk = cholesky_nonstop(&omega.sub(&sts).symmetrize());
        let v = xk.sub(&matmul(&qprev, Trans::No, &scol, Trans::No));
        let uk = tri_solve_right(&v, &skk);

        // Second Pythagorean step on the fresh block.
        let tcol = matmul(&qprev, Trans::Yes, &uk, Trans::No);
        let pk = matmul(&uk, Trans::Yes, &uk, Trans::No);
        sync += 1;
        let ttt = matmul(&tcol, Trans::Yes, &tcol, Trans::No);
        let tkk = cholesky_nonstop(&pk.sub(&ttt).symmetrize());
        let w = uk.sub(&matmul(&qprev, Trans::No, &tcol, Trans::No));
        let qk = tri_solve_right(&w, &tkk);

        // Finalize the R entries for this block: the off-diagonal column is
        // S + T * S_kk, the diagonal block T_kk * S_kk.
        let prod = matmul(&tcol, Trans::No, skk.as_matrix(), Trans::No);
        let rcol = Matrix::from_fn(k * s, s, |i, j| scol[(i, j)] + prod[(i, j)]);
        let rkk = matmul(tkk.as_matrix(), Trans::No, skk.as_matrix(), Trans::No);

        q.set_columns(k * s, &qk);
        paste(&mut r, 0, k * s, &rcol);
        paste(&mut r, k * s, k * s, &rkk);
    }
    finish(q, r, sync, start)
}

// ---------------------------------------------------------------------------
// Two-precision algorithms
// ---------------------------------------------------------------------------

/// Two-precision Pythagorean BCGS.
///
/// Data (`Q`, `R`, the projection) stays in the low precision `L`; the
/// block-with-itself inner product, the Cholesky factorization, and the
/// row-local triangular solve run in the high precision `H`, with results
/// demoted back to `L`. The split inner product still counts as one sync
/// point, so the count stays `p`.
pub fn bcgs_pip_mp<L, H>(x: &BlockMatrix<L>, io: IntraorthId) -> (BlockQr<L>, RunStats)
where
    L: Scalar + ConvertFrom<H>,
    H: Scalar + ConvertFrom<L>,
{
    let start = Instant::now();
    let (m, p, s) = (x.m(), x.p(), x.s());
    let n = p * s;
    let mut q = Matrix::zeros(m, n);
    let mut r = Matrix::zeros(n, n);
    let mut sync = 0usize;

    let f = intraorthogonalize(&x.block(0), io);
    sync += 1;
    q.set_columns(0, &f.q);
    paste(&mut r, 0, 0, f.r.as_matrix());

    for k in 1..p {
        let xk = x.block(k);
        let qprev = q.columns(0, k * s);
        // Split inner product: projection coefficients in L, the block's own
        // Gram matrix in H. One sync point.
        let rcol = matmul(&qprev, Trans::Yes, &xk, Trans::No);
        let xk_h = xk.convert::<H>();
        let pk = matmul(&xk_h, Trans::Yes, &xk_h, Trans::No);
        sync += 1;
        let rcol_h = rcol.convert::<H>();
        let rtr = matmul(&rcol_h, Trans::Yes, &rcol_h, Trans::No);
        let rkk_h = cholesky_nonstop(&pk.sub(&rtr).symmetrize());
        let v = xk.sub(&matmul(&qprev, Trans::No, &rcol, Trans::No));
        let qk_h = tri_solve_right(&v.convert::<H>(), &rkk_h);
        let qk = qk_h.convert::<L>();
        // R_kk is cast to L only after the solve has used the H value.
        let rkk = rkk_h.as_matrix().convert::<L>();
        q.set_columns(k * s, &qk);
        paste(&mut r, 0, k * s, &rcol);
        paste(&mut r, k * s, k * s, &rkk);
    }
    finish(q, r, sync, start)
}

/// Two-precision reorthogonalized variant: two `bcgs_pip_mp` passes plus
/// `R = T S` in the low precision. `2p` sync points.
pub fn bcgs_pip_plus_mp<L, H>(x: &BlockMatrix<L>, io: IntraorthId) -> (BlockQr<L>, RunStats)
where
    L: Scalar + ConvertFrom<H>,
    H: Scalar + ConvertFrom<L>,
{
    let start = Instant::now();
    let (p, s) = (x.p(), x.s());
    let (first, st1) = bcgs_pip_mp::<L, H>(x, io);
    let u = BlockMatrix {
        data: first.q,
        p,
        s,
    };
    let s_factor = first.r;
    let (second, st2) = bcgs_pip_mp::<L, H>(&u, io);
    let r = matmul(
        second.r.as_matrix(),
        Trans::No,
        s_factor.as_matrix(),
        Trans::No,
    );
    finish(second.q, r, st1.sync_points + st2.sync_points, start)
}

/// Two-precision inner-reorthogonalized variant. `2p - 1` sync points; each
/// of the two split inner products per iteration is a single sync point.
pub fn bcgs_pipi_plus_mp<L, H>(x: &BlockMatrix<L>, io: IntraorthId) -> (BlockQr<L>, RunStats)
where
    L: Scalar + ConvertFrom<H>,
    H: Scalar + ConvertFrom<L>,
{
    let start = Instant::now();
    let (m, p, s) = (x.m(), x.p(), x.s());
    let n = p * s;
    let mut q = Matrix::zeros(m, n);
    let mut r = Matrix::zeros(n, n);
    let mut sync = 0usize;

    let f = intraorthogonalize(&x.block(0), io);
    sync += 1;
    q.set_columns(0, &f.q);
    paste(&mut r, 0, 0, f.r.as_matrix());

    for k in 1..p {
        let xk = x.block(k);
        let qprev = q.columns(0, k * s);

        // First step: S column in L, block Gram and Cholesky in H.
        let scol = matmul(&qprev, Trans::Yes, &xk, Trans::No);
        let xk_h = xk.convert::<H>();
        let omega = matmul(&xk_h, Trans::Yes, &xk_h, Trans::No);
        sync += 1;
        let scol_h = scol.convert::<H>();
        let sts = matmul(&scol_h, Trans::Yes, &scol_h, Trans::No);
        let skk_h = cholesky_nonstop(&omega.sub(&sts).symmetrize());
        let v = xk.sub(&matmul(&qprev, Trans::No, &scol, Trans::No));
        let uk = tri_solve_right(&v.convert::<H>(), &skk_h).convert::<L>();

        // Second step on the stored (low-precision) intermediate block.
        let tcol = matmul(&qprev, Trans::Yes, &uk, Trans::No);
        let uk_h = uk.convert::<H>();
        let pk = matmul(&uk_h, Trans::Yes, &uk_h, Trans::No);
        sync += 1;
        let tcol_h = tcol.convert::<H>();
        let ttt = matmul(&tcol_h, Trans::Yes, &tcol_h, Trans::No);
        let tkk_h = cholesky_nonstop(&pk.sub(&ttt).symmetrize());
        let w = uk.sub(&matmul(&qprev, Trans::No, &tcol, Trans::No));
        let qk = tri_solve_right(&w.convert::<H>(), &tkk_h).convert::<L>();

        // R entries: the off-diagonal column in L, the diagonal block in H.
        let skk_l = skk_h.as_matrix().convert::<L>();
        let prod = matmul(&tcol, Trans::No, &skk_l, Trans::No);
        let rcol = Matrix::from_fn(k * s, s, |i, j| scol[(i, j)] + prod[(i, j)]);
        let rkk = matmul(tkk_h.as_matrix(), Trans::No, skk_h.as_matrix(), Trans::No)
            .convert::<L>();

        q.set_columns(k * s, &qk);
        paste(&mut r, 0, k * s, &rcol);
        paste(&mut r, k * s, k * s, &rkk);
    }
    finish(q, r, sync, start)
}

// ---------------------------------------------------------------------------
// Runtime dispatch
// ---------------------------------------------------------------------------

/// Dispatch error for [`run`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunError {
    /// A mixed-precision algorithm was requested without a precision pair.
    MissingPrecisionPair(AlgorithmId),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::MissingPrecisionPair(a) => {
                write!(f, "{a} requires a precision pair")
            }
        }
    }
}

impl std::error::Error for RunError {}

/// Run an algorithm by id on double-precision input.
///
/// Uniform-precision algorithms execute in double. Mixed-precision ones
/// demote the input into the pair's low precision, run, and widen the
/// factors back to double for measurement.
pub fn run(
    x: &BlockMatrix<f64>,
    alg: AlgorithmId,
    io: IntraorthId,
    pair: Option<PrecisionPair>,
) -> Result<(BlockQr<f64>, RunStats), RunError> {
    use crate::precision::DoubleDouble as Dd;
    use PrecisionId::*;

    match alg {
        AlgorithmId::Pip => Ok(bcgs_pip(x, io)),
        AlgorithmId::PipPlus => Ok(bcgs_pip_plus(x, io)),
        AlgorithmId::PipiPlus => Ok(bcgs_pipi_plus(x, io)),
        AlgorithmId::PipMp | AlgorithmId::PipPlusMp | AlgorithmId::PipiPlusMp => {
            let pair = pair.ok_or(RunError::MissingPrecisionPair(alg))?;

            macro_rules! go {
                ($lo:ty, $hi:ty) => {{
                    let xl = x.convert::<$lo>();
                    let (f, st) = match alg {
                        AlgorithmId::PipMp => bcgs_pip_mp::<$lo, $hi>(&xl, io),
                        AlgorithmId::PipPlusMp => bcgs_pip_plus_mp::<$lo, $hi>(&xl, io),
                        _ => bcgs_pipi_plus_mp::<$lo, $hi>(&xl, io),
                    };
                    Ok((f.convert::<f64>(), st))
                }};
            }

            match (pair.low(), pair.high()) {
                (Single, Single) => go!(f32, f32),
                (Single, Double) => go!(f32, f64),
                (Single, DoubleDouble) => go!(f32, Dd),
                (Double, Double) => go!(f64, f64),
                (Double, DoubleDouble) => go!(f64, Dd),
                (DoubleDouble, DoubleDouble) => go!(Dd, Dd),
                // PrecisionPair construction forbids a coarser high precision.
                _ => unreachable!("invalid pair escaped validation"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;
    use crate::testmat::{Knobs, MatrixSpec};

    fn glued(m: usize, p: usize, s: usize, t1: f64, t2: f64, seed: u64) -> BlockMatrix<f64> {
        MatrixSpec {
            m,
            p,
            s,
            knobs: Knobs::Glued { t1, t2 },
            seed,
        }
        .generate()
        .unwrap()
    }

    #[test]
    fn single_block_reduces_to_io() {
        let x = glued(30, 5, 2, 1.0, 1.0, 7).prefix(1);
        let io = IntraorthId::HouseQr;
        let (f, st) = bcgs_pip(&x, io);
        assert_eq!(st.sync_points, 1);
        let direct = intraorthogonalize(&x.block(0), io);
        assert_eq!(f.q.data(), direct.q.data());
        assert_eq!(f.r.as_matrix().data(), direct.r.as_matrix().data());
        // PIPI+ with one block is also just the single IO call.
        let (fi, sti) = bcgs_pipi_plus(&x, io);
        assert_eq!(sti.sync_points, 1);
        assert_eq!(fi.q.data(), direct.q.data());
        // PIP+ with one block applies the IO twice.
        let (_, stp) = bcgs_pip_plus(&x, io);
        assert_eq!(stp.sync_points, 2);
    }

    #[test]
    fn sync_counts_match_closed_forms() {
        for p in [1usize, 4, 7] {
            let x = glued(60, p, 2, 1.0, 1.0, 3);
            let io = IntraorthId::HouseQr;
            assert_eq!(bcgs_pip(&x, io).1.sync_points, p);
            assert_eq!(bcgs_pip_plus(&x, io).1.sync_points, 2 * p);
            assert_eq!(bcgs_pipi_plus(&x, io).1.sync_points, 2 * p - 1);
            assert_eq!(bcgs_pip_mp::<f64, f64>(&x, io).1.sync_points, p);
            assert_eq!(bcgs_pip_plus_mp::<f64, f64>(&x, io).1.sync_points, 2 * p);
            assert_eq!(
                bcgs_pipi_plus_mp::<f64, f64>(&x, io).1.sync_points,
                2 * p - 1
            );
        }
    }

    #[test]
    fn orthonormal_input_passes_through() {
        // Orthogonalize twice: the second run sees orthonormal input and must
        // return R = I + O(eps) and tiny loss of orthogonality.
        let x = glued(40, 4, 2, 0.5, 0.5, 11);
        let (f, _) = bcgs_pip_plus(&x, IntraorthId::HouseQr);
        let ortho = BlockMatrix::new(f.q, 4, 2).unwrap();
        let (g, st) = bcgs_pip(&ortho, IntraorthId::HouseQr);
        assert!(!st.had_nan);
        assert!(metrics::loss_of_orthogonality(&g.q) < 1e-14);
        for j in 0..8 {
            for i in 0..8 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g.r.as_matrix()[(i, j)] - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn leading_blocks_are_final() {
        // Running on a prefix of the input reproduces the leading columns of
        // Q and the leading block of R bit-for-bit: once written, entries are
        // never touched again.
        let x = glued(50, 5, 2, 2.0, 2.0, 19);
        for io in [IntraorthId::HouseQr, IntraorthId::CholQr] {
            let (full, _) = bcgs_pip(&x, io);
            let (fi, _) = bcgs_pipi_plus(&x, io);
            for k in 1..=5 {
                let (pre, _) = bcgs_pip(&x.prefix(k), io);
                let ks = k * 2;
                for j in 0..ks {
                    for i in 0..50 {
                        assert_eq!(
                            full.q[(i, j)].to_bits(),
                            pre.q[(i, j)].to_bits(),
                            "q mismatch at k={k}"
                        );
                    }
                    for i in 0..ks {
                        assert_eq!(full.r.as_matrix()[(i, j)].to_bits(), pre.r.as_matrix()[(i, j)].to_bits());
                    }
                }
                let (prei, _) = bcgs_pipi_plus(&x.prefix(k), io);
                for j in 0..ks {
                    for i in 0..50 {
                        assert_eq!(fi.q[(i, j)].to_bits(), prei.q[(i, j)].to_bits());
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_pair_is_bit_identical() {
        let x = glued(48, 6, 2, 2.0, 1.0, 23);
        for io in [IntraorthId::HouseQr, IntraorthId::CholQr] {
            let pairs: [(
                fn(&BlockMatrix<f64>, IntraorthId) -> (BlockQr<f64>, RunStats),
                fn(&BlockMatrix<f64>, IntraorthId) -> (BlockQr<f64>, RunStats),
            ); 3] = [
                (bcgs_pip::<f64>, bcgs_pip_mp::<f64, f64>),
                (bcgs_pip_plus::<f64>, bcgs_pip_plus_mp::<f64, f64>),
                (bcgs_pipi_plus::<f64>, bcgs_pipi_plus_mp::<f64, f64>),
            ];
            for (uniform, mixed) in pairs {
                let (a, _) = uniform(&x, io);
                let (b, _) = mixed(&x, io);
                for (u, v) in a.q.data().iter().zip(b.q.data()) {
                    assert_eq!(u.to_bits(), v.to_bits());
                }
                for (u, v) in a.r.as_matrix().data().iter().zip(b.r.as_matrix().data()) {
                    assert_eq!(u.to_bits(), v.to_bits());
                }
            }
        }
    }

    #[test]
    fn dispatcher_requires_pair_for_mp() {
        let x = glued(30, 3, 2, 1.0, 1.0, 2);
        let err = run(&x, AlgorithmId::PipMp, IntraorthId::HouseQr, None);
        assert!(err.is_err());
        let pair = PrecisionPair::new(PrecisionId::Single, PrecisionId::Double).unwrap();
        let ok = run(&x, AlgorithmId::PipMp, IntraorthId::HouseQr, Some(pair));
        assert!(ok.is_ok());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in AlgorithmId::ALL {
            assert_eq!(AlgorithmId::parse(a.name()), Some(a));
        }
        assert_eq!(AlgorithmId::parse("BCGS"), None);
    }
}
