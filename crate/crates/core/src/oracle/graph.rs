use std::collections::VecDeque;
use std::io::Write;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;

use super::enumerate::{check_cap, rank, unrank};
use crate::config::{Configuration, LineParams, Topology, Word};
use crate::error::{Error, Result};
use crate::rule::{active_unchecked, LocalRule, RuleParams, ThreadRule};

/// Exact Markov chain of the process over every configuration of an
/// instance. State `r` is the word of lexicographic rank `r`; each state has
/// one successor per selectable index (itself when that index is inactive),
/// each taken with probability `1/degree`.
#[derive(Clone, Debug)]
pub struct TransitionGraph {
    params: LineParams,
    topology: Topology,
    sight: usize,
    degree: usize,
    succ: Vec<u32>,
    extremes: Vec<(i32, i32)>,
}

/// Builds the chain for the thread rule.
pub fn build_graph(
    params: LineParams,
    rule: &RuleParams,
    topology: Topology,
    cap: usize,
) -> Result<TransitionGraph> {
    TransitionGraph::build(params, &ThreadRule::new(*rule), topology, cap)
}

/// States reachable from `start` through non-self-loop edges, sorted.
pub fn reachable_set(graph: &TransitionGraph, start: usize) -> Vec<usize> {
    graph.reachable_from(&[start], |_| true)
}

impl TransitionGraph {
    pub fn build<R: LocalRule>(
        params: LineParams,
        rule: &R,
        topology: Topology,
        cap: usize,
    ) -> Result<TransitionGraph> {
        let states = check_cap(&params, cap)?;
        if states > u32::MAX as usize {
            return Err(Error::EnumerationCap {
                states: states as u128,
                cap: u32::MAX as usize,
            });
        }
        let degree = match topology {
            Topology::Chain => params.tot() - 1,
            Topology::Cycle => params.tot(),
        };
        let (a, b) = (params.a_count(), params.b_count());
        let mut succ = vec![0u32; states * degree];
        let mut extremes = vec![(0i32, 0i32); states];
        succ.par_chunks_mut(degree.max(1))
            .zip(extremes.par_iter_mut())
            .enumerate()
            .for_each(|(r, (row, ext))| {
                let c = Configuration::new(unrank(r as u64, a, b), params, topology)
                    .expect("unranked word has the instance's letter counts");
                *ext = (c.h_min() as i32, c.h_max() as i32);
                for (slot, i) in row.iter_mut().zip(c.selectable()) {
                    *slot = if active_unchecked(rule, &c, i) {
                        let next = c.flip(i).expect("active index is flippable");
                        rank(next.word()) as u32
                    } else {
                        r as u32
                    };
                }
            });
        Ok(TransitionGraph {
            params,
            topology,
            sight: rule.sight(),
            degree,
            succ,
            extremes,
        })
    }

    /// Rough byte count of a graph for the instance, for reporting before a
    /// build.
    pub fn memory_estimate(params: &LineParams, topology: Topology) -> u128 {
        let states = super::count_configs(params);
        let degree = match topology {
            Topology::Chain => params.tot() as u128 - 1,
            Topology::Cycle => params.tot() as u128,
        };
        states.saturating_mul(degree * 4 + 8)
    }

    pub fn params(&self) -> &LineParams {
        &self.params
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn sight(&self) -> usize {
        self.sight
    }

    pub fn len(&self) -> usize {
        self.extremes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extremes.is_empty()
    }

    /// Out-degree of every state: the number of selectable indices.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn word(&self, state: usize) -> Word {
        unrank(state as u64, self.params.a_count(), self.params.b_count())
    }

    pub fn config(&self, state: usize) -> Configuration {
        Configuration::new(self.word(state), self.params, self.topology)
            .expect("graph states match the instance")
    }

    pub fn index_of(&self, word: &Word) -> Option<usize> {
        let fits = word.len() == self.params.tot()
            && word.count(crate::config::Letter::A) == self.params.a_count();
        fits.then(|| rank(word) as usize)
    }

    /// Successor per selectable index, in index order.
    pub fn successors(&self, state: usize) -> &[u32] {
        &self.succ[state * self.degree..(state + 1) * self.degree]
    }

    pub fn h_min(&self, state: usize) -> i64 {
        self.extremes[state].0 as i64
    }

    pub fn h_max(&self, state: usize) -> i64 {
        self.extremes[state].1 as i64
    }

    pub fn thickness(&self, state: usize) -> i64 {
        self.h_max(state) - self.h_min(state)
    }

    pub fn is_christoffel(&self, state: usize) -> bool {
        self.thickness(state) == self.params.per() as i64 - 1
    }

    pub fn is_absorbing(&self, state: usize) -> bool {
        self.successors(state).iter().all(|&s| s as usize == state)
    }

    pub fn absorbing_states(&self) -> Vec<usize> {
        (0..self.len()).filter(|&s| self.is_absorbing(s)).collect()
    }

    /// Distinct non-self-loop successors with their edge multiplicity.
    pub fn moves(&self, state: usize) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &s in self.successors(state) {
            let s = s as usize;
            if s == state {
                continue;
            }
            match out.iter_mut().find(|(t, _)| *t == s) {
                Some((_, m)) => *m += 1,
                None => out.push((s, 1)),
            }
        }
        out
    }

    /// Number of self-loop edges of `state`.
    pub fn self_loops(&self, state: usize) -> usize {
        self.successors(state)
            .iter()
            .filter(|&&s| s as usize == state)
            .count()
    }

    /// BFS from `starts`, only expanding states for which `expand` holds.
    pub(crate) fn reachable_from(
        &self,
        starts: &[usize],
        expand: impl Fn(usize) -> bool,
    ) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::new();
        for &s in starts {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            if !expand(s) {
                continue;
            }
            for &t in self.successors(s) {
                let t = t as usize;
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        (0..self.len()).filter(|&s| seen[s]).collect()
    }

    /// Closed communicating classes (recurrent classes), each sorted, ordered
    /// by smallest member.
    pub fn closed_classes(&self) -> Vec<Vec<usize>> {
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(self.len(), 0);
        for _ in 0..self.len() {
            g.add_node(());
        }
        for s in 0..self.len() {
            for (t, _) in self.moves(s) {
                g.add_edge((s as u32).into(), (t as u32).into(), ());
            }
        }
        let sccs = tarjan_scc(&g);
        let mut comp = vec![0usize; self.len()];
        for (k, scc) in sccs.iter().enumerate() {
            for v in scc {
                comp[v.index()] = k;
            }
        }
        let mut classes: Vec<Vec<usize>> = sccs
            .iter()
            .enumerate()
            .filter(|(k, scc)| {
                scc.iter().all(|v| {
                    self.successors(v.index())
                        .iter()
                        .all(|&t| comp[t as usize] == *k)
                })
            })
            .map(|(_, scc)| {
                let mut members: Vec<usize> = scc.iter().map(|v| v.index()).collect();
                members.sort_unstable();
                members
            })
            .collect();
        classes.sort_unstable_by_key(|c| c[0]);
        classes
    }

    /// Edge-list text: one `from to multiplicity/degree` line per distinct
    /// non-self-loop edge, then one `state state loops/degree` line for
    /// states with self-loops.
    pub fn write_edge_list<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(
            out,
            "# instance {} topology {} sight {} states {} degree {}",
            self.params,
            self.topology,
            self.sight,
            self.len(),
            self.degree
        )?;
        for s in 0..self.len() {
            let w = self.word(s);
            for (t, m) in self.moves(s) {
                writeln!(out, "{} {} {}/{}", w, self.word(t), m, self.degree)?;
            }
            let loops = self.self_loops(s);
            if loops > 0 {
                writeln!(out, "{} {} {}/{}", w, w, loops, self.degree)?;
            }
        }
        Ok(())
    }
}
