use thiserror::Error;

use super::structure::{FoLinkKind, FoStructure};

/// Default cap on the number of switchings the oracle will enumerate.
pub const DEFAULT_SWITCHING_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{count} switchings exceed the cap of {cap}")]
    TooManySwitchings { count: u128, cap: u64 },
    #[error("the proof structure still has unlinked atoms")]
    Incomplete,
}

/// A correction graph that is cyclic or disconnected, with the edges chosen
/// by its switching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// For every par link (by link index), the occurrence it was connected to.
    pub switching: Vec<(usize, usize)>,
    pub edges: Vec<(usize, usize)>,
    pub cyclic: bool,
    pub connected: bool,
}

/// Danos-Regnier style check extended to quantifiers: every correction graph
/// must be acyclic and connected. Returns the first failing correction graph.
pub fn switching_oracle(ps: &FoStructure, cap: u64) -> Result<Option<Counterexample>, OracleError> {
    if !ps.is_complete() {
        return Err(OracleError::Incomplete);
    }
    let n = ps.occs.len();
    let free: Vec<_> = (0..n).map(|o| ps.free_vars(o)).collect();
    let mut fixed = Vec::new();
    let mut choices: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (i, l) in ps.links.iter().enumerate() {
        match l.rule.kind() {
            FoLinkKind::Axiom | FoLinkKind::Cut => {
                let ends: Vec<usize> = l.premisses.iter().chain(&l.conclusions).copied().collect();
                fixed.push((ends[0], ends[1]));
            }
            FoLinkKind::Tensor => {
                for &p in &l.premisses {
                    fixed.push((l.conclusions[0], p));
                }
            }
            FoLinkKind::Par => {
                let c = l.conclusions[0];
                let options = match &l.var {
                    Some(x) => {
                        let mut opts = l.premisses.clone();
                        opts.extend((0..n).filter(|&o| o != l.premisses[0] && free[o].contains(x)));
                        opts
                    }
                    None => l.premisses.clone(),
                };
                choices.push((i, c, options));
            }
        }
    }
    let count: u128 = choices.iter().map(|(_, _, o)| o.len() as u128).product();
    if count > cap as u128 {
        return Err(OracleError::TooManySwitchings { count, cap });
    }
    let mut idx = vec![0usize; choices.len()];
    loop {
        let mut edges = fixed.clone();
        edges.extend(choices.iter().zip(&idx).map(|((_, c, o), &k)| (*c, o[k])));
        let (cyclic, connected) = shape(n, &edges);
        if cyclic || !connected {
            return Ok(Some(Counterexample {
                switching: choices.iter().zip(&idx).map(|((l, _, o), &k)| (*l, o[k])).collect(),
                edges,
                cyclic,
                connected,
            }));
        }
        // odometer over the choice vector
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].2.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `(has a cycle, is connected)` for an undirected multigraph on `0..n`.
fn shape(n: usize, edges: &[(usize, usize)]) -> (bool, bool) {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut cyclic = false;
    let mut components = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            cyclic = true;
        } else {
            parent[ra] = rb;
            components -= 1;
        }
    }
    (cyclic, components <= 1)
}

/// True when every correction graph is acyclic and connected.
pub fn is_net_by_switching(ps: &FoStructure, cap: u64) -> Result<bool, OracleError> {
    switching_oracle(ps, cap).map(|c| c.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{complete_structures, unfold_fol};
    use crate::formula::parse_fo_sequent;

    fn structures(text: &str) -> Vec<FoStructure> {
        complete_structures(&parse_fo_sequent(text).unwrap())
            .into_iter()
            .map(|mut ps| {
                ps.ground();
                ps
            })
            .collect()
    }

    #[test]
    fn identity_has_one_empty_switching() {
        let ps = &structures("a |- a")[0];
        assert_eq!(switching_oracle(ps, DEFAULT_SWITCHING_CAP), Ok(None));
    }

    #[test]
    fn crossed_matching_is_cyclic() {
        let all = structures("a -o a |- a -o a");
        let results: Vec<_> = all
            .iter()
            .map(|ps| switching_oracle(ps, DEFAULT_SWITCHING_CAP).unwrap())
            .collect();
        assert_eq!(results.iter().filter(|r| r.is_none()).count(), 1);
        let bad = results.into_iter().flatten().next().unwrap();
        assert!(bad.cyclic);
    }

    #[test]
    fn quantifier_shift_is_cyclic() {
        let ps = &structures("a -o exists x.b(x) |- exists y.(a -o b(y))")[0];
        let c = switching_oracle(ps, DEFAULT_SWITCHING_CAP).unwrap().unwrap();
        assert!(c.cyclic);
        assert_eq!(is_net_by_switching(ps, DEFAULT_SWITCHING_CAP), Ok(false));
    }

    #[test]
    fn guards() {
        let open = unfold_fol(&parse_fo_sequent("a |- a").unwrap());
        assert_eq!(switching_oracle(&open, 1), Err(OracleError::Incomplete));
        let ps = &structures("a -o b |- a -o b")[0];
        assert!(matches!(
            switching_oracle(ps, 0),
            Err(OracleError::TooManySwitchings { cap: 0, .. })
        ));
    }
}
