#![allow(dead_code)]

use bbcert::blackbox::{BlackBox, DenseMatrix};
use bbcert::field::{Field, Poly};
use bbcert::gen::{block_diag, companion, jordan_block, random_similar};
use bbcert::matrix::Matrix;
use rand::Rng;

pub fn dense<'a>(f: &Field, m: &Matrix) -> BlackBox<'a> {
    BlackBox::new(DenseMatrix::new(f, m.clone()).unwrap())
}

/// Random monic polynomial of degree `d`.
pub fn random_monic<R: Rng + ?Sized>(f: &Field, d: usize, rng: &mut R) -> Poly {
    let mut c = f.random_vec(d, rng);
    c.push(1);
    Poly::from_coeffs(c)
}

/// A random matrix of size `n` with repeated invariant factors: a block
/// diagonal of Jordan blocks and companion matrices, conjugated by a
/// random nonsingular matrix.
pub fn structured_matrix<R: Rng + ?Sized>(f: &Field, n: usize, rng: &mut R) -> Matrix {
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let size = rng.gen_range(1..=left.min(4));
        let block = match rng.gen_range(0..3) {
            0 => jordan_block(f, 0, size),
            1 => jordan_block(f, f.random(rng), size),
            _ => companion(f, &random_monic(f, size, rng)),
        };
        // Repeat some blocks to create shared invariant factors.
        if left >= 2 * size && rng.gen_bool(0.3) {
            blocks.push(block.clone());
            left -= size;
        }
        blocks.push(block);
        left -= size;
    }
    random_similar(f, &block_diag(&blocks), rng)
}
