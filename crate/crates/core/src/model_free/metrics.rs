use crate::error::{invalid, Result};
use crate::reward::MixedProfile;
use crate::scalar::Scalar;

use super::perturbation::RandomPayoffGame;
use super::qtable::{QLayout, QTable};

/// Expected rewards laid out like the cells of a Q-table of `layout`.
pub fn expected_q_values<T: Scalar>(game: &RandomPayoffGame<T>, layout: QLayout) -> Result<Vec<T>> {
    let dims = game.dims();
    let n = dims.actions();
    let mut out = Vec::new();
    match layout {
        QLayout::Aggregate => {
            for i in 0..dims.agents() {
                out.extend(game.expected_succinct(i)?.values().iter().copied());
            }
        }
        QLayout::Joint => {
            let columns = QTable::<T>::joint(dims)?.columns();
            let mut actions = vec![0; dims.agents()];
            for i in 0..dims.agents() {
                for a in 0..n {
                    for col in 0..columns {
                        // decode col into the opponents' actions, last opponent least significant
                        let mut rest = col;
                        for j in (0..dims.agents()).rev().filter(|&j| j != i) {
                            actions[j] = rest % n;
                            rest /= n;
                        }
                        actions[i] = a;
                        out.push(game.expected_reward(i, &actions));
                    }
                }
            }
        }
        QLayout::OwnAction => {
            return invalid("own-action Q-values have no well-defined expected reward");
        }
    }
    Ok(out)
}

pub(crate) fn l1_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + (x - y).abs())
}

/// Total l1 error between a Q-table and the expected rewards it estimates,
/// summed over agents, own actions and columns.
pub fn q_error<T: Scalar>(q: &QTable<T>, game: &RandomPayoffGame<T>) -> Result<T> {
    if q.dims() != game.dims() {
        return invalid("Q-table and game dimensions differ");
    }
    let expected = expected_q_values(game, q.layout())?;
    Ok(l1_distance(q.values(), &expected))
}

/// `sum_i ||gamma^i - target^i||_1`.
pub fn ne_distance<T: Scalar>(gammas: &[Vec<T>], target: &MixedProfile<T>) -> Result<T> {
    let target = target.strategies();
    if gammas.len() != target.len() {
        return invalid(format!(
            "{} frequency vectors against a target of {} agents",
            gammas.len(),
            target.len()
        ));
    }
    let mut total = T::zero();
    for (i, (g, t)) in gammas.iter().zip(target).enumerate() {
        if g.len() != t.len() {
            return invalid(format!("agent {i}: {} frequencies against {} target entries", g.len(), t.len()));
        }
        total = total + l1_distance(g, t);
    }
    Ok(total)
}
