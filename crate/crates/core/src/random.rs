//! Seeded generation of random test inputs.
//!
//! Coefficients are drawn from `{−3..3}/{1..3}`; small numerators keep the
//! exact determinants cheap.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::invariant::{relative_invariant, RepresentationChoice};
use crate::jet::{ReparamJet, ScalarJet, SurfaceJet};
use crate::matrix::Matrix;
use crate::multiindex::{enumerate_up_to, MultiIndex};
use crate::rational::{frac, Rational};
use crate::symalg::{IndexSpace, SymMatrix};

/// Draws tried before a degenerate configuration is reported.
pub const MAX_RESAMPLES: usize = 64;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `trial` of `seed`.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        Self { rng }
    }

    pub fn small_rational(&mut self) -> Rational {
        frac(self.rng.random_range(-3..=3), self.rng.random_range(1..=3))
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.small_rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    pub fn scalar_jet(&mut self, vars: usize, order: usize) -> ScalarJet {
        let terms: Vec<(MultiIndex, Rational)> = enumerate_up_to(vars, order)
            .into_iter()
            .map(|a| (a, self.small_rational()))
            .collect();
        ScalarJet::from_terms(vars, order, &terms).expect("terms within order")
    }

    pub fn surface(&mut self, m: usize, n: usize, order: usize) -> SurfaceJet {
        SurfaceJet::new((0..n).map(|_| self.scalar_jet(m, order)).collect()).expect("uniform")
    }

    /// A surface on which every listed invariant is nonzero at the origin.
    ///
    /// Gives up after [`MAX_RESAMPLES`] draws: some stacked matrices are
    /// singular for every surface.
    pub fn nondegenerate_surface(
        &mut self,
        m: usize,
        n: usize,
        order: usize,
        choices: &[RepresentationChoice],
    ) -> Result<SurfaceJet> {
        let mut last = None;
        for _ in 0..MAX_RESAMPLES {
            let u = self.surface(m, n, order);
            last = None;
            for c in choices {
                if relative_invariant(&u, c)?.is_zero() {
                    last = Some(c);
                    break;
                }
            }
            if last.is_none() {
                return Ok(u);
            }
        }
        Err(Error::VanishingInvariant(format!(
            "{} vanished on {MAX_RESAMPLES} random surfaces",
            last.map(ToString::to_string).unwrap_or_default()
        )))
    }

    /// A random origin-fixing reparameterization with invertible linear part.
    pub fn reparam(&mut self, m: usize, order: usize) -> ReparamJet {
        loop {
            let comps = (0..m)
                .map(|_| {
                    let mut j = self.scalar_jet(m, order);
                    let c = j.constant_term().clone();
                    j = j.sub(&ScalarJet::constant(m, order, c)).expect("same shape");
                    j
                })
                .collect();
            if let Ok(s) = ReparamJet::new(SurfaceJet::new(comps).expect("uniform")) {
                return s;
            }
        }
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.small_rational())
    }

    pub fn invertible_matrix(&mut self, n: usize) -> Matrix {
        loop {
            let h = self.matrix(n, n);
            if !h.det().expect("square").is_zero() {
                return h;
            }
        }
    }

    pub fn sym_matrix(&mut self, rows: IndexSpace, cols: IndexSpace) -> SymMatrix {
        SymMatrix::from_fn(rows, cols, |_, _| self.small_rational())
    }

    pub fn nonzero_sym_matrix(&mut self, rows: IndexSpace, cols: IndexSpace) -> SymMatrix {
        loop {
            let a = self.sym_matrix(rows, cols);
            if !a.is_zero() {
                return a;
            }
        }
    }
}
