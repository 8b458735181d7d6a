use std::collections::HashSet;

use rayon::prelude::*;

use super::config::{EpisodeConfig, HyperGrid};
use super::runner::run_episode;
use crate::error::{Error, Result};
use crate::learning::Hyperparams;

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub best: Hyperparams,
    pub best_score: f64,
    /// Every cell with its mean total reward, in grid order.
    pub scores: Vec<(Hyperparams, f64)>,
}

/// Scores every `(alpha, tau)` cell by mean total reward over `search_seeds`
/// and returns the best. Cells that diverge score negative infinity. Ties go to the smaller alpha, then the smaller tau.
///
/// `eval_seeds` are the instances the chosen parameters will be reported on;
/// the search refuses to run if any of them would also be searched on.
pub fn grid_search(
    template: &EpisodeConfig,
    grid: &HyperGrid,
    search_seeds: &[u64],
    eval_seeds: &[u64],
) -> Result<GridResult> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "empty hyperparameter grid"));
    }
    if search_seeds.is_empty() {
        return Err(Error::invalid("search_seeds", "at least one search instance is required"));
    }
    let eval: HashSet<u64> = eval_seeds.iter().copied().collect();
    if let Some(seed) = search_seeds.iter().find(|s| eval.contains(s)) {
        return Err(Error::invalid(
            "search_seeds",
            format!("seed {seed} is also an evaluation seed"),
        ));
    }

    let cells = grid.cells(template.params.gamma)?;
    let scores = cells
        .par_iter()
        .map(|&params| {
            let episode = EpisodeConfig { params, ..*template };
            let mut total = 0.0;
            for &seed in search_seeds {
                match run_episode(&episode, seed) {
                    Ok(record) => total += record.total_reward(),
                    // A cell that blows up on any instance is never selected.
                    Err(Error::Diverged(_)) => return Ok((params, f64::NEG_INFINITY)),
                    Err(e) => return Err(e),
                }
            }
            Ok((params, total / search_seeds.len() as f64))
        })
        .collect::<Result<Vec<_>>>()?;

    let (best, best_score) = scores
        .iter()
        .copied()
        .reduce(|best, cell| if cell.1 > best.1 { cell } else { best })
        .expect("non-empty grid");
    Ok(GridResult {
        best,
        best_score,
        scores,
    })
}
