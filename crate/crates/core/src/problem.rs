//! The problem interface consumed by the search loop.
//!
//! This trait is the library's extension point and is kept stable: a new
//! problem only has to supply an initial solution, a full objective, a
//! random move generator and an exact delta for that move.

use rand::Rng;

use crate::error::ConfigError;
use crate::fitness::Fitness;

/// A minimisation problem with a single random perturbation move.
///
/// Moves are plain descriptors: proposing or evaluating a move never
/// mutates the solution, so a rejected candidate needs no undo.
///
/// Implementations must satisfy, for every solution `s` and every move `m`
/// returned by [`Problem::propose_move`]:
///
/// ```text
/// fitness(apply_move(s, m)) == fitness(s) + move_delta(s, m)
/// ```
///
/// exactly, in integer arithmetic.
pub trait Problem: Sync {
    type Solution: Clone + Send;
    type Move: Copy;

    /// Number of elements (cities, facilities) in the instance.
    fn size(&self) -> usize;

    /// Smallest size for which the move operator is defined.
    fn min_size(&self) -> usize;

    /// Fails when the instance is too small for the move operator.
    fn check(&self) -> Result<(), ConfigError> {
        if self.size() < self.min_size() {
            Err(ConfigError::ProblemTooSmall {
                size: self.size(),
                required: self.min_size(),
            })
        } else {
            Ok(())
        }
    }

    fn initial_solution<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Solution;

    /// Objective computed from scratch.
    fn fitness(&self, solution: &Self::Solution) -> Fitness;

    fn propose_move<R: Rng + ?Sized>(&self, solution: &Self::Solution, rng: &mut R) -> Self::Move;

    /// Exact change in fitness that applying `mv` would cause.
    fn move_delta(&self, solution: &Self::Solution, mv: Self::Move) -> Fitness;

    fn apply_move(&self, solution: &mut Self::Solution, mv: Self::Move);
}
