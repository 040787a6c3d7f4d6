use num_complex::Complex64;

use super::product::ProductEngine;
use crate::error::{Error, Result};
use crate::flags::Flags;
use crate::hermite::{GridFunction, SpectralCoefficients};
use crate::spectral::{lp_block, DyadicPartition};

/// Default block separation of the paraproduct split.
pub const DEFAULT_N0: i32 = 2;

/// The three paraproduct pieces of `f g`, projected onto degree `2N`.
///
/// With separation `N0`: low-high sums `f_k g_l` over `k <= l - N0`,
/// high-low over `l <= k - N0`, resonant over `|k - l| < N0`. `N0 = 2`
/// gives the usual split `k <= l - 2`, `l <= k - 2`, `|k - l| <= 1`.
#[derive(Clone, Debug)]
pub struct BonyPieces {
    pub low_high: SpectralCoefficients,
    pub high_low: SpectralCoefficients,
    pub resonant: SpectralCoefficients,
    pub n0: i32,
    pub flags: Flags,
}

impl BonyPieces {
    /// `low_high + high_low + resonant`.
    pub fn sum(&self) -> SpectralCoefficients {
        &(&self.low_high + &self.high_low) + &self.resonant
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Piece {
    LowHigh,
    HighLow,
    Resonant,
}

fn classify(k: i32, l: i32, n0: i32) -> Piece {
    if k <= l - n0 {
        Piece::LowHigh
    } else if l <= k - n0 {
        Piece::HighLow
    } else {
        Piece::Resonant
    }
}

/// Splits `f g` into its paraproduct pieces. Block products are accumulated
/// on the grid in ascending `(k, l)` order and each piece is projected once.
pub fn bony_decompose(
    f: &SpectralCoefficients,
    g: &SpectralCoefficients,
    partition: &DyadicPartition,
    n0: i32,
    engine: &ProductEngine,
) -> Result<BonyPieces> {
    if n0 < 1 {
        return Err(Error::invalid(format!("block separation N0 = {n0} must be at least 1")));
    }
    if f.basis() != g.basis() {
        return Err(Error::BasisMismatch("paraproduct of different bases".into()));
    }
    partition.check_basis(&f.basis())?;
    let basis = f.basis();
    let blocks: Vec<i32> = partition.blocks_for(&basis).collect();
    let synth = |c: &SpectralCoefficients, j: i32| -> Result<Option<GridFunction>> {
        let b = lp_block(partition, j, c);
        if b.is_zero() {
            Ok(None)
        } else {
            engine.synthesize(&b).map(Some)
        }
    };
    let fk = blocks.iter().map(|&j| synth(f, j)).collect::<Result<Vec<_>>>()?;
    let gl = blocks.iter().map(|&j| synth(g, j)).collect::<Result<Vec<_>>>()?;

    let grid = engine.grid_for(&basis)?;
    let zero = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut acc = [zero.clone(), zero.clone(), zero];
    for (a, &k) in blocks.iter().enumerate() {
        let Some(fv) = &fk[a] else { continue };
        for (b, &l) in blocks.iter().enumerate() {
            let Some(gv) = &gl[b] else { continue };
            let slot = match classify(k, l, n0) {
                Piece::LowHigh => 0,
                Piece::HighLow => 1,
                Piece::Resonant => 2,
            };
            for ((out, x), y) in acc[slot].iter_mut().zip(fv.values()).zip(gv.values()) {
                *out += x * y;
            }
        }
    }
    let mut flags = Flags::when(f.is_lossy() || g.is_lossy(), Flags::LOSSY);
    let mut project = |values: Vec<Complex64>| -> Result<SpectralCoefficients> {
        let p = engine.project(&GridFunction::new(grid.clone(), values)?, &basis)?;
        flags |= p.flags;
        Ok(p.coeffs)
    };
    let [lh, hl, res] = acc;
    let low_high = project(lh)?;
    let high_low = project(hl)?;
    let resonant = project(res)?;
    Ok(BonyPieces {
        low_high,
        high_low,
        resonant,
        n0,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::HermiteBasis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(n: usize) -> (HermiteBasis, DyadicPartition, ProductEngine) {
        let b = HermiteBasis::new(1, n).unwrap();
        (b, DyadicPartition::for_basis(&b), ProductEngine::default())
    }

    #[test]
    fn ground_state_is_resonant() {
        let (b, p, eng) = setup(16);
        let h0 = SpectralCoefficients::unit(b, &[0]).unwrap();
        let pieces = bony_decompose(&h0, &h0, &p, DEFAULT_N0, &eng).unwrap();
        assert!(pieces.low_high.is_zero() && pieces.high_low.is_zero());
        let full = eng.product(&h0, &h0).unwrap().coeffs;
        assert!(pieces.resonant.max_abs_diff(&full) < 1e-15);
    }

    #[test]
    fn pieces_recombine() {
        let (b, p, eng) = setup(64);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = SpectralCoefficients::random(b, 16, &mut rng);
        let g = SpectralCoefficients::random(b, 16, &mut rng);
        let pieces = bony_decompose(&f, &g, &p, DEFAULT_N0, &eng).unwrap();
        let full = eng.product(&f, &g).unwrap().coeffs;
        let res = (&pieces.sum() - &full).norm() / (f.norm() * g.norm());
        assert!(res < 1e-8, "{res}");
        assert!(!pieces.low_high.is_zero() && !pieces.high_low.is_zero());
        let three = bony_decompose(&f, &g, &p, 3, &eng).unwrap();
        assert!((&three.sum() - &pieces.sum()).norm() <= 1e-10 * full.norm());
    }

    #[test]
    fn mirror_symmetry() {
        let (b, p, eng) = setup(32);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = SpectralCoefficients::random(b, 8, &mut rng);
        let g = SpectralCoefficients::random(b, 8, &mut rng);
        let fg = bony_decompose(&f, &g, &p, 2, &eng).unwrap();
        let gf = bony_decompose(&g, &f, &p, 2, &eng).unwrap();
        assert!(fg.low_high.max_abs_diff(&gf.high_low) < 1e-14);
        assert!(bony_decompose(&f, &g, &p, 0, &eng).is_err());
    }
}
