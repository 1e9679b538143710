use std::fmt;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::graph::TransitionGraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Strongly connected blocks up to this size are solved exactly.
    pub exact_block_limit: usize,
    /// Residual bound for the iterative fallback.
    pub tolerance: f64,
    pub max_sweeps: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            exact_block_limit: 300,
            tolerance: 1e-10,
            max_sweeps: 10_000_000,
        }
    }
}

/// Expected number of steps before the chain first enters a target set.
#[derive(Clone, Debug, PartialEq)]
pub enum HittingTime {
    /// Some reachable state cannot reach the target.
    Infinite,
    Exact(BigRational),
    /// Gauss-Seidel result with its final max residual.
    Approximate {
        value: f64,
        residual: f64,
    },
}

impl HittingTime {
    pub fn is_infinite(&self) -> bool {
        matches!(self, HittingTime::Infinite)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            HittingTime::Infinite => f64::INFINITY,
            HittingTime::Exact(r) => ratio_to_f64(r),
            HittingTime::Approximate { value, .. } => *value,
        }
    }

    pub fn method(&self) -> &'static str {
        match self {
            HittingTime::Infinite => "reachability",
            HittingTime::Exact(_) => "exact-rational",
            HittingTime::Approximate { .. } => "gauss-seidel",
        }
    }
}

impl fmt::Display for HittingTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HittingTime::Infinite => f.write_str("+inf"),
            HittingTime::Exact(r) => write!(f, "{}", r),
            HittingTime::Approximate { value, .. } => write!(f, "{}", value),
        }
    }
}

impl Serialize for HittingTime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HittingTime", 4)?;
        st.serialize_field("expected", &self.to_string())?;
        let value = self.to_f64();
        st.serialize_field("value", &value.is_finite().then_some(value))?;
        st.serialize_field("method", self.method())?;
        let residual = match self {
            HittingTime::Approximate { residual, .. } => Some(*residual),
            _ => None,
        };
        st.serialize_field("residual", &residual)?;
        st.end()
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => f64::NAN,
    }
}

/// Expected steps from `start` until the chain enters `targets`.
///
/// States reachable from `start` before a target are collected first; if any
/// of them cannot reach a target the answer is `Infinite`. Otherwise the
/// system `T(x) = 1 + (1/N) sum_j T(succ_j(x))`, `T = 0` on targets, is
/// solved block by block over its strongly connected components, sinks
/// first.
pub fn exact_hitting_time(
    graph: &TransitionGraph,
    start: usize,
    targets: &[usize],
    opts: &SolveOptions,
) -> Result<HittingTime> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument("target set is empty".into()));
    }
    let mut is_target = vec![false; graph.len()];
    for &t in targets {
        if t >= graph.len() {
            return Err(Error::InvalidArgument(format!(
                "target state {t} out of range"
            )));
        }
        is_target[t] = true;
    }
    if start >= graph.len() {
        return Err(Error::InvalidArgument(format!(
            "start state {start} out of range"
        )));
    }
    if is_target[start] {
        return Ok(HittingTime::Exact(BigRational::zero()));
    }

    let reach = graph.reachable_from(&[start], |s| !is_target[s]);
    let transient: Vec<usize> = reach.into_iter().filter(|&s| !is_target[s]).collect();
    let mut local = vec![usize::MAX; graph.len()];
    for (k, &s) in transient.iter().enumerate() {
        local[s] = k;
    }

    // reverse reachability towards the targets inside the transient set
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); transient.len()];
    let mut can_hit = vec![false; transient.len()];
    let mut stack = Vec::new();
    for (k, &s) in transient.iter().enumerate() {
        for (t, _) in graph.moves(s) {
            if is_target[t] {
                if !can_hit[k] {
                    can_hit[k] = true;
                    stack.push(k);
                }
            } else {
                preds[local[t]].push(k);
            }
        }
    }
    while let Some(k) = stack.pop() {
        for &p in &preds[k] {
            if !can_hit[p] {
                can_hit[p] = true;
                stack.push(p);
            }
        }
    }
    if can_hit.iter().any(|&h| !h) {
        return Ok(HittingTime::Infinite);
    }

    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(transient.len(), 0);
    for _ in 0..transient.len() {
        g.add_node(());
    }
    for (k, &s) in transient.iter().enumerate() {
        for (t, _) in graph.moves(s) {
            if !is_target[t] {
                g.add_edge((k as u32).into(), (local[t] as u32).into(), ());
            }
        }
    }
    // sinks of the condensation come first
    let blocks: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|b| {
            let mut b: Vec<usize> = b.into_iter().map(|v| v.index()).collect();
            b.sort_unstable();
            b
        })
        .collect();
    let system = System {
        graph,
        transient: &transient,
        local: &local,
        is_target: &is_target,
    };
    let root = local[start];
    if blocks.iter().all(|b| b.len() <= opts.exact_block_limit) {
        let values = system.solve_exact(&blocks);
        Ok(HittingTime::Exact(values[root].clone()))
    } else {
        let (values, residual) = system.solve_iterative(&blocks, opts);
        Ok(HittingTime::Approximate {
            value: values[root],
            residual,
        })
    }
}

struct System<'a> {
    graph: &'a TransitionGraph,
    transient: &'a [usize],
    local: &'a [usize],
    is_target: &'a [bool],
}

impl System<'_> {
    /// Row `k` as `(diagonal, off-diagonal (local, multiplicity))`, scaled
    /// by the degree: `(N - loops) T_k - sum m T_j = N`.
    fn row(&self, k: usize) -> (usize, Vec<(usize, usize)>) {
        let s = self.transient[k];
        let diag = self.graph.degree() - self.graph.self_loops(s);
        let off = self
            .graph
            .moves(s)
            .into_iter()
            .filter(|(t, _)| !self.is_target[*t])
            .map(|(t, m)| (self.local[t], m))
            .collect();
        (diag, off)
    }

    fn solve_exact(&self, blocks: &[Vec<usize>]) -> Vec<BigRational> {
        let n = self.transient.len();
        let degree = BigRational::from_integer(BigInt::from(self.graph.degree()));
        let mut value: Vec<Option<BigRational>> = vec![None; n];
        for block in blocks {
            let m = block.len();
            let pos = |k: usize| block.binary_search(&k).ok();
            let mut mat = vec![vec![BigRational::zero(); m + 1]; m];
            for (r, &k) in block.iter().enumerate() {
                let (diag, off) = self.row(k);
                mat[r][r] = BigRational::from_integer(BigInt::from(diag));
                let mut rhs = degree.clone();
                for (j, mult) in off {
                    let mult = BigRational::from_integer(BigInt::from(mult));
                    match pos(j) {
                        Some(c) => mat[r][c] -= mult,
                        None => {
                            let known = value[j].as_ref().expect("later blocks are solved first");
                            rhs += mult * known;
                        }
                    }
                }
                mat[r][m] = rhs;
            }
            for (r, x) in gauss_jordan(mat).into_iter().enumerate() {
                value[block[r]] = Some(x);
            }
        }
        value
            .into_iter()
            .map(|v| v.expect("every block solved"))
            .collect()
    }

    fn solve_iterative(&self, blocks: &[Vec<usize>], opts: &SolveOptions) -> (Vec<f64>, f64) {
        let n = self.transient.len();
        let degree = self.graph.degree() as f64;
        let rows: Vec<(f64, Vec<(usize, f64)>)> = (0..n)
            .map(|k| {
                let (diag, off) = self.row(k);
                (
                    diag as f64,
                    off.into_iter().map(|(j, m)| (j, m as f64)).collect(),
                )
            })
            .collect();
        let mut value = vec![0.0f64; n];
        let mut worst = 0.0f64;
        for block in blocks {
            let mut residual = f64::INFINITY;
            let mut sweeps = 0u64;
            while residual >= opts.tolerance && sweeps < opts.max_sweeps {
                for &k in block {
                    let (diag, off) = &rows[k];
                    let sum: f64 = off.iter().map(|&(j, m)| m * value[j]).sum();
                    value[k] = (degree + sum) / diag;
                }
                residual = block
                    .iter()
                    .map(|&k| {
                        let (diag, off) = &rows[k];
                        let sum: f64 = off.iter().map(|&(j, m)| m * value[j]).sum();
                        ((diag * value[k] - sum - degree) / degree).abs()
                    })
                    .fold(0.0, f64::max);
                sweeps += 1;
            }
            worst = worst.max(residual);
        }
        (value, worst)
    }
}

/// Solves an augmented `m x (m+1)` system that is known to be nonsingular.
fn gauss_jordan(mut mat: Vec<Vec<BigRational>>) -> Vec<BigRational> {
    let m = mat.len();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !mat[r][col].is_zero())
            .expect("hitting-time system is nonsingular");
        mat.swap(col, pivot);
        let inv = BigRational::one() / &mat[col][col];
        for x in mat[col][col..].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = mat[col].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * p;
            }
        }
    }
    mat.into_iter()
        .map(|mut row| row.pop().expect("augmented column"))
        .collect()
}
