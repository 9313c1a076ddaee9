use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// Free components beyond this many are not enumerated.
const MAX_FREE_COMPONENTS: usize = 16;

/// The wire of `qubit` is severed right after gate `after_gate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WireCut {
    pub after_gate: usize,
    pub qubit: usize,
}

/// A split of a circuit into an upstream and a downstream subcircuit joined
/// only by the listed wire cuts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutPlan {
    pub width: usize,
    pub cuts: Vec<WireCut>,
    /// Subcircuit id per gate of the source circuit: 0 upstream, 1 downstream.
    pub subcircuit_assignment: Vec<usize>,
    pub num_subcircuits: usize,
    /// Source qubits of each subcircuit, ascending. Cut qubits appear in both.
    pub upstream_qubits: Vec<usize>,
    pub downstream_qubits: Vec<usize>,
}

impl CutPlan {
    /// Plan for an explicit set of cuts; the component split is chosen as in
    /// [`find_cut`].
    pub fn from_cuts(c: &Circuit, cuts: &[WireCut]) -> Result<CutPlan> {
        best_split(c, cuts)?
            .map(|(plan, _)| plan)
            .ok_or_else(|| Error::InvalidCutPlan(format!("cuts {cuts:?} do not split the circuit in two")))
    }

    pub fn num_cuts(&self) -> usize {
        self.cuts.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serialises")
    }

    /// Local index of source qubit `q` in the upstream subcircuit.
    pub fn upstream_local(&self, q: usize) -> Option<usize> {
        self.upstream_qubits.iter().position(|&x| x == q)
    }

    pub fn downstream_local(&self, q: usize) -> Option<usize> {
        self.downstream_qubits.iter().position(|&x| x == q)
    }

    pub(crate) fn check_against(&self, c: &Circuit) -> Result<()> {
        if c.width() != self.width || c.len() != self.subcircuit_assignment.len() {
            return Err(Error::InvalidCutPlan("plan was built for a different circuit".into()));
        }
        Ok(())
    }
}

type Score = (usize, usize, Vec<usize>);

/// Smallest plan with at most `max_cuts` wire cuts that splits `c` into two
/// subcircuits. Ties go to the most even qubit split, then the narrower
/// downstream part.
pub fn find_cut(c: &Circuit, max_cuts: usize) -> Result<CutPlan> {
    if c.width() < 2 {
        return Err(Error::InvalidCutPlan("cutting needs at least two qubits".into()));
    }
    let candidates = candidate_cuts(c);
    for k in 0..=max_cuts.min(c.width()) {
        let mut best: Option<(CutPlan, Score)> = None;
        for_each_combination(candidates.len(), k, &mut |idx| {
            let cuts: Vec<WireCut> = idx.iter().map(|&i| candidates[i]).collect();
            let qubits: BTreeSet<usize> = cuts.iter().map(|w| w.qubit).collect();
            if qubits.len() != cuts.len() {
                return Ok(());
            }
            if let Some((plan, score)) = best_split(c, &cuts)? {
                if best.as_ref().is_none_or(|(_, s)| score < *s) {
                    best = Some((plan, score));
                }
            }
            Ok(())
        })?;
        if let Some((plan, _)) = best {
            return Ok(plan);
        }
    }
    Err(Error::NoCutWithinBudget { budget: max_cuts })
}

/// Gaps between consecutive multi-qubit gates on a wire.
fn candidate_cuts(c: &Circuit) -> Vec<WireCut> {
    let mut out = Vec::new();
    for q in 0..c.width() {
        let multi: Vec<usize> = c
            .gates()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.qubits.len() > 1 && g.qubits.contains(&q))
            .map(|(i, _)| i)
            .collect();
        for w in multi.windows(2) {
            out.push(WireCut { after_gate: w[0], qubit: q });
        }
    }
    out.sort();
    out
}

fn for_each_combination(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, f)?;
            cur.pop();
        }
        Ok(())
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Segment 0 of qubit `q` is `2q`, the part after its cut is `2q + 1`.
fn segment(cuts: &[WireCut], gate: usize, q: usize) -> usize {
    match cuts.iter().find(|w| w.qubit == q) {
        Some(w) if gate > w.after_gate => 2 * q + 1,
        _ => 2 * q,
    }
}

fn best_split(c: &Circuit, cuts: &[WireCut]) -> Result<Option<(CutPlan, Score)>> {
    let n = c.width();
    let mut cuts = cuts.to_vec();
    cuts.sort();
    let mut seen = BTreeSet::new();
    for w in &cuts {
        let g = c
            .gates()
            .get(w.after_gate)
            .ok_or_else(|| Error::InvalidCutPlan(format!("gate {} out of range", w.after_gate)))?;
        if !g.kind.is_unitary() || !g.qubits.contains(&w.qubit) {
            return Err(Error::InvalidCutPlan(format!(
                "gate {} is not a unitary acting on qubit {}",
                w.after_gate, w.qubit
            )));
        }
        if !seen.insert(w.qubit) {
            return Err(Error::InvalidCutPlan(format!("qubit {} cut twice", w.qubit)));
        }
    }

    let mut uf = UnionFind((0..2 * n).collect());
    for (i, g) in c.gates().iter().enumerate() {
        let first = segment(&cuts, i, g.qubits[0]);
        for &q in &g.qubits[1..] {
            uf.union(first, segment(&cuts, i, q));
        }
    }
    let mut segments: Vec<usize> = (0..n).map(|q| 2 * q).collect();
    segments.extend(cuts.iter().map(|w| 2 * w.qubit + 1));
    let roots: BTreeSet<usize> = segments.iter().map(|&s| uf.find(s)).collect();
    let roots: Vec<usize> = roots.into_iter().collect();
    let comp = |uf: &mut UnionFind, s: usize| roots.iter().position(|&r| r == uf.find(s)).expect("root");

    // Component sides: Some(false) upstream, Some(true) downstream.
    let mut forced: Vec<Option<bool>> = vec![None; roots.len()];
    for w in &cuts {
        for (s, side) in [(2 * w.qubit, false), (2 * w.qubit + 1, true)] {
            let k = comp(&mut uf, s);
            match forced[k] {
                Some(prev) if prev != side => return Ok(None),
                _ => forced[k] = Some(side),
            }
        }
    }
    let free: Vec<usize> = (0..roots.len()).filter(|&k| forced[k].is_none()).collect();
    if free.len() > MAX_FREE_COMPONENTS {
        return Err(Error::InvalidCutPlan(format!("{} disconnected components", free.len())));
    }
    let seg_comp: Vec<(usize, usize)> = segments.iter().map(|&s| (s, comp(&mut uf, s))).collect();

    let mut best: Option<(Vec<bool>, Score)> = None;
    for mask in 0..1usize << free.len() {
        let mut side: Vec<bool> = forced.iter().map(|f| f.unwrap_or(false)).collect();
        for (j, &k) in free.iter().enumerate() {
            side[k] = mask >> j & 1 == 1;
        }
        let mut up = BTreeSet::new();
        let mut down = BTreeSet::new();
        for &(s, k) in &seg_comp {
            if side[k] { down.insert(s / 2) } else { up.insert(s / 2) };
        }
        if up.is_empty() || down.is_empty() {
            continue;
        }
        let score = (up.len().abs_diff(down.len()), down.len(), up.into_iter().collect());
        if best.as_ref().is_none_or(|(_, s)| score < *s) {
            best = Some((side, score));
        }
    }
    let Some((side, score)) = best else {
        return Ok(None);
    };

    let mut up = BTreeSet::new();
    let mut down = BTreeSet::new();
    for &(s, k) in &seg_comp {
        if side[k] { down.insert(s / 2) } else { up.insert(s / 2) };
    }
    let assignment = c
        .gates()
        .iter()
        .enumerate()
        .map(|(i, g)| usize::from(side[comp(&mut uf, segment(&cuts, i, g.qubits[0]))]))
        .collect();
    let plan = CutPlan {
        width: n,
        cuts,
        subcircuit_assignment: assignment,
        num_subcircuits: 2,
        upstream_qubits: up.into_iter().collect(),
        downstream_qubits: down.into_iter().collect(),
    };
    Ok(Some((plan, (score.0, score.1, score.2))))
}
