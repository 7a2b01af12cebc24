//! Signature grids and Holant partition functions.

use serde::{Deserialize, Serialize};

use crate::error::{HolantError, Result};
use crate::gadget::{connect, holo, self_loop, tensor, Transform2x2};
use crate::scalar::{Backend, Scalar};
use crate::signature::{arity_cap, equality, Signature};

/// Variable `slot` (0-based) of vertex `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub v: usize,
    pub slot: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Brute,
    Contract,
}

pub const BRUTE_EDGE_CAP: usize = 30;
pub const EXACT_CONTRACT_CAP: usize = 16;
pub const FLOAT_CONTRACT_CAP: usize = 22;

#[derive(Clone, Debug, PartialEq)]
pub struct SignatureGrid<S> {
    vertices: Vec<Signature<S>>,
    edges: Vec<(Slot, Slot)>,
    bipartition: Option<Vec<Side>>,
    /// `incidence[v][k]` is the edge holding slot k of vertex v.
    incidence: Vec<Vec<usize>>,
}

impl<S: Scalar> SignatureGrid<S> {
    pub fn new(
        vertices: Vec<Signature<S>>,
        edges: Vec<(Slot, Slot)>,
        bipartition: Option<Vec<Side>>,
    ) -> Result<Self> {
        let bad = |m: String| Err(HolantError::MalformedGrid(m));
        if edges.is_empty() {
            return bad("grid has no edges".into());
        }
        if let Some(b) = &bipartition {
            if b.len() != vertices.len() {
                return bad("bipartition length differs from vertex count".into());
            }
        }
        let mut incidence: Vec<Vec<Option<usize>>> =
            vertices.iter().map(|f| vec![None; f.arity()]).collect();
        for (e, (p, q)) in edges.iter().enumerate() {
            if p == q {
                return bad(format!("edge {e} joins a slot to itself"));
            }
            for s in [p, q] {
                let Some(slots) = incidence.get_mut(s.v) else {
                    return bad(format!("edge {e} names missing vertex {}", s.v));
                };
                let Some(cell) = slots.get_mut(s.slot) else {
                    return bad(format!("edge {e} names missing slot {} of vertex {}", s.slot, s.v));
                };
                if cell.is_some() {
                    return bad(format!("slot {} of vertex {} is used twice", s.slot, s.v));
                }
                *cell = Some(e);
            }
        }
        let incidence = incidence
            .into_iter()
            .enumerate()
            .map(|(v, slots)| {
                slots
                    .into_iter()
                    .enumerate()
                    .map(|(k, e)| e.ok_or_else(|| HolantError::MalformedGrid(format!("slot {k} of vertex {v} is unused"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignatureGrid {
            vertices,
            edges,
            bipartition,
            incidence,
        })
    }

    pub fn vertices(&self) -> &[Signature<S>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(Slot, Slot)] {
        &self.edges
    }

    pub fn bipartition(&self) -> Option<&[Side]> {
        self.bipartition.as_deref()
    }

    /// True when a bipartition is present and every edge crosses it.
    pub fn is_bipartite(&self) -> bool {
        match &self.bipartition {
            Some(b) => self.edges.iter().all(|(p, q)| b[p.v] != b[q.v]),
            None => false,
        }
    }

    pub fn to_float(&self) -> SignatureGrid<crate::scalar::FloatScalar> {
        SignatureGrid {
            vertices: self.vertices.iter().map(|f| f.to_float()).collect(),
            edges: self.edges.clone(),
            bipartition: self.bipartition.clone(),
            incidence: self.incidence.clone(),
        }
    }
}

pub fn holant_eval<S: Scalar>(grid: &SignatureGrid<S>, mode: Mode) -> Result<S> {
    match mode {
        Mode::Brute => brute(grid),
        Mode::Contract => contract(grid),
    }
}

fn brute<S: Scalar>(grid: &SignatureGrid<S>) -> Result<S> {
    let m = grid.edges.len();
    if m > BRUTE_EDGE_CAP {
        return Err(HolantError::CapExceeded(format!(
            "brute force needs at most {BRUTE_EDGE_CAP} edges, grid has {m}"
        )));
    }
    let mut total = S::zero();
    'assign: for sigma in 0..1usize << m {
        let mut prod = S::one();
        for (f, inc) in grid.vertices.iter().zip(&grid.incidence) {
            let idx = inc.iter().fold(0, |acc, &e| (acc << 1) | ((sigma >> e) & 1));
            let v = f.get(idx);
            if v.is_zero() {
                continue 'assign;
            }
            prod = prod.times(v);
        }
        total = total.plus(&prod);
    }
    Ok(total)
}

/// One step of a contraction plan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contraction {
    /// Tensor merged away.
    pub eliminated: usize,
    /// Tensor that absorbs it and keeps its id.
    pub into: usize,
    /// Arity of the result.
    pub arity: usize,
    /// No shared edge: an outer product of disconnected pieces.
    pub outer: bool,
}

/// Greedy minimum-result-arity order; ties go to the smallest vertex ids.
pub fn plan_contraction<S: Scalar>(grid: &SignatureGrid<S>) -> Vec<Contraction> {
    // labels after tracing self-loops
    let mut labels: Vec<Option<Vec<usize>>> = grid.incidence.iter().map(|inc| Some(dedupe_loops(inc))).collect();
    let mut plan = Vec::new();
    loop {
        let alive: Vec<usize> = (0..labels.len()).filter(|&v| labels[v].is_some()).collect();
        if alive.len() <= 1 {
            break;
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for (x, &a) in alive.iter().enumerate() {
            for &b in &alive[x + 1..] {
                let la = labels[a].as_ref().unwrap();
                let lb = labels[b].as_ref().unwrap();
                let shared = la.iter().filter(|e| lb.contains(e)).count();
                if shared == 0 {
                    continue;
                }
                let arity = la.len() + lb.len() - 2 * shared;
                if best.map_or(true, |(r, _, _)| arity < r) {
                    best = Some((arity, a, b));
                }
            }
        }
        let (arity, a, b, outer) = match best {
            Some((r, a, b)) => (r, a, b, false),
            None => {
                let (a, b) = (alive[0], alive[1]);
                let r = labels[a].as_ref().unwrap().len() + labels[b].as_ref().unwrap().len();
                (r, a, b, true)
            }
        };
        let (la, lb) = (labels[a].as_ref().unwrap().len(), labels[b].as_ref().unwrap().len());
        let (eliminated, into) = if lb < la { (b, a) } else { (a, b) };
        let merged = merge_labels(labels[into].as_ref().unwrap(), labels[eliminated].as_ref().unwrap());
        labels[into] = Some(merged);
        labels[eliminated] = None;
        plan.push(Contraction {
            eliminated,
            into,
            arity,
            outer,
        });
    }
    plan
}

fn dedupe_loops(inc: &[usize]) -> Vec<usize> {
    inc.iter()
        .copied()
        .filter(|e| inc.iter().filter(|x| *x == e).count() == 1)
        .collect()
}

fn merge_labels(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter()
        .filter(|e| !b.contains(e))
        .chain(b.iter().filter(|e| !a.contains(e)))
        .copied()
        .collect()
}

fn contract_cap<S: Scalar>() -> usize {
    let mode_cap = match S::BACKEND {
        Backend::Exact => EXACT_CONTRACT_CAP,
        Backend::Float => FLOAT_CONTRACT_CAP,
    };
    mode_cap.min(arity_cap())
}

fn contract<S: Scalar>(grid: &SignatureGrid<S>) -> Result<S> {
    let plan = plan_contraction(grid);
    let cap = contract_cap::<S>();
    let widest = grid.vertices.iter().map(|f| f.arity()).max().unwrap_or(0);
    if plan.iter().any(|c| c.arity > cap) || widest > cap {
        if grid.edges.len() <= BRUTE_EDGE_CAP {
            return brute(grid);
        }
        return Err(HolantError::CapExceeded(format!(
            "contraction needs intermediate arity above {cap}"
        )));
    }
    let mut tensors: Vec<Option<(Signature<S>, Vec<usize>)>> = grid
        .vertices
        .iter()
        .zip(&grid.incidence)
        .map(|(f, inc)| trace_loops(f, inc).map(Some))
        .collect::<Result<_>>()?;
    for c in &plan {
        let (fa, la) = tensors[c.into].take().expect("live tensor");
        let (fb, lb) = tensors[c.eliminated].take().expect("live tensor");
        let pairs: Vec<(usize, usize)> = la
            .iter()
            .enumerate()
            .filter_map(|(i, e)| lb.iter().position(|x| x == e).map(|j| (i + 1, j + 1)))
            .collect();
        let f = if pairs.is_empty() {
            tensor(&fa, &fb)?
        } else {
            connect(&fa, &fb, &pairs, None)?
        };
        tensors[c.into] = Some((f, merge_labels(&la, &lb)));
    }
    let (f, labels) = tensors.into_iter().flatten().next().expect("one tensor remains");
    debug_assert!(labels.is_empty());
    Ok(f.get(0).clone())
}

/// Contracts repeated labels (self-loop edges) of one vertex.
fn trace_loops<S: Scalar>(f: &Signature<S>, inc: &[usize]) -> Result<(Signature<S>, Vec<usize>)> {
    let mut f = f.clone();
    let mut labels = inc.to_vec();
    loop {
        let dup = labels
            .iter()
            .enumerate()
            .find_map(|(i, e)| labels[i + 1..].iter().position(|x| x == e).map(|j| (i, i + 1 + j)));
        let Some((i, j)) = dup else { break };
        f = self_loop(&f, i + 1, j + 1, &equality(2))?;
        labels.remove(j);
        labels.remove(i);
    }
    Ok((f, labels))
}

/// Subdivides every edge with a =₂ vertex; originals go right, new vertices left.
pub fn two_stretch<S: Scalar>(grid: &SignatureGrid<S>) -> Result<SignatureGrid<S>> {
    let n = grid.vertices.len();
    let mut vertices = grid.vertices.clone();
    let mut edges = Vec::with_capacity(2 * grid.edges.len());
    let mut sides = vec![Side::R; n];
    for (k, (p, q)) in grid.edges.iter().enumerate() {
        let w = n + k;
        vertices.push(equality(2));
        sides.push(Side::L);
        edges.push((*p, Slot { v: w, slot: 0 }));
        edges.push((Slot { v: w, slot: 1 }, *q));
    }
    SignatureGrid::new(vertices, edges, Some(sides))
}

/// Left signatures become f·T⁻¹, right signatures T·f.
pub fn holo_grid<S: Scalar>(grid: &SignatureGrid<S>, t: &Transform2x2<S>) -> Result<SignatureGrid<S>> {
    let Some(sides) = &grid.bipartition else {
        return Err(HolantError::Precondition("grid has no bipartition".into()));
    };
    if !grid.is_bipartite() {
        return Err(HolantError::Precondition("an edge does not cross the bipartition".into()));
    }
    let left = t.inverse()?.transpose();
    let vertices = grid
        .vertices
        .iter()
        .zip(sides)
        .map(|(f, s)| match s {
            Side::L => holo(f, &left),
            Side::R => holo(f, t),
        })
        .collect();
    Ok(SignatureGrid {
        vertices,
        edges: grid.edges.clone(),
        bipartition: grid.bipartition.clone(),
        incidence: grid.incidence.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CycloScalar;
    use crate::signature::exact;

    fn s(v: usize, slot: usize) -> Slot {
        Slot { v, slot }
    }

    fn triangle() -> SignatureGrid<CycloScalar> {
        SignatureGrid::new(
            vec![equality(2), equality(2), equality(2)],
            vec![(s(0, 1), s(1, 0)), (s(1, 1), s(2, 0)), (s(2, 1), s(0, 0))],
            None,
        )
        .unwrap()
    }

    #[test]
    fn small_values() {
        let g = SignatureGrid::new(vec![exact(1, &[1, 1]), exact(1, &[1, 1])], vec![(s(0, 0), s(1, 0))], None).unwrap();
        for m in [Mode::Brute, Mode::Contract] {
            assert_eq!(holant_eval(&g, m).unwrap(), CycloScalar::from_i64(2));
            assert_eq!(holant_eval(&triangle(), m).unwrap(), CycloScalar::from_i64(2));
        }
        let lp = SignatureGrid::new(vec![equality::<CycloScalar>(2)], vec![(s(0, 0), s(0, 1))], None).unwrap();
        assert_eq!(holant_eval(&lp, Mode::Brute).unwrap(), CycloScalar::from_i64(2));
        assert_eq!(holant_eval(&lp, Mode::Contract).unwrap(), CycloScalar::from_i64(2));
    }

    #[test]
    fn malformed() {
        assert!(SignatureGrid::<CycloScalar>::new(vec![equality(2)], vec![], None).is_err());
        assert!(SignatureGrid::new(vec![equality::<CycloScalar>(2)], vec![(s(0, 0), s(0, 0))], None).is_err());
        assert!(SignatureGrid::new(vec![equality::<CycloScalar>(3)], vec![(s(0, 0), s(0, 1))], None).is_err());
    }

    #[test]
    fn stretch() {
        let g = two_stretch(&triangle()).unwrap();
        assert_eq!(g.vertices().len(), 6);
        assert!(g.is_bipartite());
        assert_eq!(holant_eval(&g, Mode::Contract).unwrap(), CycloScalar::from_i64(2));
    }

    #[test]
    fn plans() {
        // path 0 - 1 - 2 - 3 with unary ends
        let g = SignatureGrid::new(
            vec![exact(1, &[1, 2]), equality(2), equality(2), exact(1, &[3, 1])],
            vec![(s(0, 0), s(1, 0)), (s(1, 1), s(2, 0)), (s(2, 1), s(3, 0))],
            None,
        )
        .unwrap();
        let order: Vec<usize> = plan_contraction(&g).iter().map(|c| c.eliminated).collect();
        assert_eq!(order, vec![0, 1, 2]);
        // star centred at 0
        let g = SignatureGrid::new(
            vec![equality(3), exact(1, &[1, 1]), exact(1, &[1, 2]), exact(1, &[2, 1])],
            vec![(s(0, 0), s(1, 0)), (s(0, 1), s(2, 0)), (s(0, 2), s(3, 0))],
            None,
        )
        .unwrap();
        let order: Vec<usize> = plan_contraction(&g).iter().map(|c| c.eliminated).collect();
        assert_eq!(order[..2], [1, 2]);
        assert_eq!(holant_eval(&g, Mode::Contract).unwrap(), CycloScalar::from_i64(1 * 1 * 2 + 1 * 2 * 1));
    }

    #[test]
    fn hat_grid() {
        let g = two_stretch(&SignatureGrid::new(
            vec![exact(3, &[1, 2, 0, 1, 3, 0, 1, 1]), exact(1, &[2, 5]), exact(2, &[1, 1, 0, 2])],
            vec![(s(0, 0), s(1, 0)), (s(0, 1), s(2, 0)), (s(0, 2), s(2, 1))],
            None,
        )
        .unwrap())
        .unwrap();
        let zi = Transform2x2::z_inv();
        let h = holo_grid(&g, &zi).unwrap();
        let ne = crate::signature::neq2::<CycloScalar>();
        for (f, side) in h.vertices().iter().zip(h.bipartition().unwrap()) {
            if *side == Side::L {
                assert_eq!(f, &ne);
            }
        }
        assert_eq!(holant_eval(&h, Mode::Contract).unwrap(), holant_eval(&g, Mode::Brute).unwrap());
    }
}
