//! Finite evaluation grids over the type space.

use crate::error::Error;
use crate::model::{ProjectInstance, TypeProfile};
use crate::rat::Rat;

/// Hard ceiling on the number of candidate profiles a grid may span.
pub const PROFILE_LIMIT: u128 = 10_000_000;

/// A finite set of type-space points `{0, c/m, 2c/m, ..., c}`, optionally
/// enriched with extra exact points. Quantified checks run over profiles
/// drawn from these points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    instance: ProjectInstance,
    steps: usize,
    points: Vec<Rat>,
}

impl Grid {
    /// Uniform grid with `m` steps, endpoints included.
    pub fn new(instance: ProjectInstance, steps: usize) -> Result<Self, Error> {
        if steps == 0 {
            return Err(Error::ZeroSteps);
        }
        let m = Rat::from_int(steps as i64);
        let points: Vec<Rat> = (0..=steps)
            .map(|k| instance.cost() * Rat::from_int(k as i64) / &m)
            .collect();
        let grid = Grid {
            instance,
            steps,
            points,
        };
        grid.check_size()?;
        Ok(grid)
    }

    /// Add exact points (deduplicated, kept sorted). Each must lie in
    /// `[0, c]`.
    pub fn enrich(mut self, extra: &[Rat]) -> Result<Self, Error> {
        for p in extra {
            self.instance.check_type(p)?;
            if let Err(pos) = self.points.binary_search(p) {
                self.points.insert(pos, p.clone());
            }
        }
        self.check_size()?;
        Ok(self)
    }

    fn check_size(&self) -> Result<(), Error> {
        let profiles = (self.points.len() as u128)
            .checked_pow(self.instance.players() as u32)
            .unwrap_or(u128::MAX);
        if profiles > PROFILE_LIMIT {
            return Err(Error::GridTooLarge {
                profiles,
                limit: PROFILE_LIMIT,
            });
        }
        Ok(())
    }

    pub fn instance(&self) -> &ProjectInstance {
        &self.instance
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn contains(&self, value: &Rat) -> bool {
        self.points.binary_search(value).is_ok()
    }

    /// Whether the cost share `c/n` is a grid point; the socially optimal
    /// rule's boundary case is exercised on both sides only when it is.
    pub fn contains_share(&self) -> bool {
        self.contains(&self.instance.share())
    }

    /// Every profile over the grid points, in lexicographic order.
    pub fn profiles(&self) -> Vec<TypeProfile> {
        let n = self.instance.players();
        let mut out = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            let values: Vec<Rat> = idx.iter().map(|&k| self.points[k].clone()).collect();
            out.push(TypeProfile::new(&self.instance, values).expect("grid points are valid"));
            let mut pos = n;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < self.points.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}
