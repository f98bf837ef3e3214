use std::fmt::Write as _;

use aggfp::{succinct_size, GameDims, Matrix, Perturbation, PolymatrixGame, RandomGame};

use crate::config::GameSpec;
use crate::error::{usage, Result};

pub const RPS_MATRIX: [[f64; 3]; 3] = [[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]];
pub const RPS4_SUPPORT: [f64; 5] = [-4.0, -2.0, 0.0, 2.0, 4.0];
pub const RPS4_PROBS: [f64; 5] = [0.1, 0.2, 0.4, 0.2, 0.1];

/// Four agents playing rock-paper-scissors against each other, every
/// reward shifted by independent zero-mean noise on {-4, -2, 0, 2, 4}.
pub fn build_rps4() -> RandomGame {
    let dims = GameDims::new(4, 3).expect("valid dims");
    let matrix = Matrix::from_rows(RPS_MATRIX.iter().map(|r| r.to_vec()).collect()).expect("square");
    let base = PolymatrixGame::symmetric(dims, matrix).expect("one matrix per agent");
    let theta = Perturbation::new(RPS4_SUPPORT.to_vec(), RPS4_PROBS.to_vec()).expect("valid distribution");
    RandomGame::with_common(base, theta)
}

pub fn build_game(spec: &GameSpec) -> Result<RandomGame> {
    match spec {
        GameSpec::Rps4 => Ok(build_rps4()),
        GameSpec::Inline {
            agents,
            actions,
            matrix,
            support,
            probs,
        } => {
            let dims = GameDims::new(*agents, *actions)?;
            let base = PolymatrixGame::symmetric(dims, Matrix::from_rows(matrix.clone())?)?;
            let theta = Perturbation::new(support.clone(), probs.clone())
                .map_err(|e| crate::error::HarnessError::Usage(format!("perturbation_probs: {e}")))?;
            Ok(RandomGame::with_common(base, theta))
        }
    }
}

/// Human-readable summary of a builtin game.
pub fn game_info(name: &str) -> Result<String> {
    let game = match name {
        "rps4" => build_rps4(),
        other => return usage(format!("game: unknown builtin game '{other}' (expected rps4)")),
    };
    let dims = game.dims();
    let base = game.base();
    let m = base.pairwise(0);
    let mut out = String::new();
    let _ = writeln!(out, "game: {name}");
    let _ = writeln!(out, "agents: {}", dims.agents());
    let _ = writeln!(out, "actions: {}", dims.actions());
    let _ = writeln!(out, "pairwise matrix (shared by all agents):");
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>4}")).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
    let _ = writeln!(out, "antisymmetric: {}", m.is_antisymmetric());
    let theta = game.perturbation(0);
    let _ = writeln!(out, "perturbation support: {:?}", theta.support());
    let _ = writeln!(out, "perturbation probs: {:?}", theta.probs());
    let _ = writeln!(out, "perturbation mean: {}", theta.mean());
    let _ = writeln!(out, "opponent count classes: {}", dims.count_space_size());
    let _ = writeln!(
        out,
        "succinct entries per agent: {} (full table: {})",
        succinct_size(&dims),
        dims.actions().pow(dims.agents() as u32)
    );
    let _ = writeln!(out, "largest reward magnitude: {}", game.reward_bound());
    let _ = writeln!(out, "equilibrium: every agent uniform over actions");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use aggfp::ActionProfile;

    #[test]
    fn rps4_is_antisymmetric_and_zero_sum() {
        let game = build_rps4();
        let base = game.base();
        assert!(base.pairwise(0).is_antisymmetric());
        let d = base.dims();
        let mut profiles = 0;
        for idx in 0..81usize {
            let actions: Vec<usize> = (0..4).map(|i| idx / 3usize.pow(3 - i) % 3).collect();
            let p = ActionProfile::new(&d, actions).unwrap();
            let total: f64 = (0..4).map(|i| base.reward(i, &p).unwrap()).sum();
            assert_eq!(total, 0.0);
            profiles += 1;
        }
        assert_eq!(profiles, 81);
        assert_eq!(game.perturbation(2).mean(), 0.0);
    }

    #[test]
    fn info_mentions_sizes() {
        let info = game_info("rps4").unwrap();
        assert!(info.contains("succinct entries per agent: 30 (full table: 81)"));
        assert!(game_info("chess").is_err());
    }
}
