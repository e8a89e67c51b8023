//! The two reductions between instances and minor conditions, plus
//! condition-satisfaction checking inside a polymorphism minion.

use crate::conditions::{witness_satisfies, FunctionSymbol, MinorCondition, MinorIdentity, Side};
use crate::core::{
    decode_tuple, disjoint_union, encode_tuple, power, quotient, Partition, PromiseTemplate,
    Structure,
};
use crate::homsearch::{find_hom_counted, SearchOpts};
use crate::minionlab::{is_polymorphism, FunctionTable};
use crate::{Error, Result, SizeCap};
use serde_json::json;
use std::collections::BTreeMap;

/// A v_{f(a_1,..,a_n)} vertex name: one symbol application per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLabel {
    pub symbol: String,
    pub args: Vec<usize>,
}

/// Decoding data for an indicator instance: which contracted vertex each
/// symbol application landed on.
#[derive(Debug, Clone)]
pub struct LabelMap {
    pub domain_size: usize,
    /// (symbol name, arity, offset of its block in the pre-structure).
    pub blocks: Vec<(String, usize, usize)>,
    /// Pre-structure vertex -> quotient vertex.
    pub to_class: Vec<usize>,
    /// One representative label per quotient vertex.
    pub labels: Vec<VertexLabel>,
}

impl LabelMap {
    pub fn vertex_of(&self, symbol: &str, args: &[usize]) -> Option<usize> {
        let (_, arity, off) = self.blocks.iter().find(|(n, _, _)| n == symbol)?;
        if args.len() != *arity || args.iter().any(|&a| a >= self.domain_size) {
            return None;
        }
        Some(self.to_class[off + encode_tuple(args, self.domain_size)])
    }
}

/// An assignment of minion members to the condition's symbols.
#[derive(Debug, Clone)]
pub struct ConditionWitness {
    pub assignment: BTreeMap<String, FunctionTable>,
}

/// The condition Sigma(A, I): a symbol f_v of arity |A| per element of I, a
/// symbol g_c of arity |R^A| per constraint, and one identity per scope
/// position with the map read off A's canonical tuple list.
pub fn instance_to_condition(a: &Structure, i: &Structure) -> Result<MinorCondition> {
    if !a.similar_to(i) {
        return Err(Error::Invalid("structures are not similar".into()));
    }
    if a.domain_size == 0 {
        return Err(Error::Invalid("template has empty domain".into()));
    }
    let mut symbols: Vec<FunctionSymbol> = (0..i.domain_size)
        .map(|v| FunctionSymbol { name: format!("f{}", v), arity: a.domain_size, side: Side::U })
        .collect();
    let mut identities = Vec::new();
    let mut c_idx = 0;
    for (r, tuples) in i.relations.iter().enumerate() {
        let template_tuples = &a.relations[r];
        for scope in tuples {
            if template_tuples.is_empty() {
                return Err(Error::Invalid(format!(
                    "relation {} is empty in {} but constrained in {}",
                    a.signature.relations[r].name, a.name, i.name
                )));
            }
            let g = symbols.len();
            symbols.push(FunctionSymbol {
                name: format!("g{}", c_idx),
                arity: template_tuples.len(),
                side: Side::V,
            });
            for (j, &v) in scope.iter().enumerate() {
                let pi = template_tuples.iter().map(|t| t[j]).collect();
                identities.push(MinorIdentity { lhs: v, rhs: g, pi });
            }
            c_idx += 1;
        }
    }
    MinorCondition::new(format!("sigma_{}_{}", a.name, i.name), symbols, identities)
}

/// The indicator instance I_Sigma(A): one power A^{ar(sym)} per symbol,
/// contracted along all instances of the identities.
pub fn condition_to_instance(
    c: &MinorCondition,
    a: &Structure,
    cap: &SizeCap,
) -> Result<(Structure, LabelMap)> {
    let powers: Vec<Structure> = c
        .symbols
        .iter()
        .map(|s| power(a, s.arity, cap))
        .collect::<Result<_>>()?;
    let refs: Vec<&Structure> = powers.iter().collect();
    let (pre, offsets) = disjoint_union(&refs)?;
    let mut part = Partition::new(pre.domain_size);
    for id in &c.identities {
        let nf = c.symbols[id.lhs].arity;
        let (off_f, off_g) = (offsets[id.lhs], offsets[id.rhs]);
        for code in 0..a.domain_size.pow(nf as u32) {
            let args = decode_tuple(code, a.domain_size, nf);
            let args_g: Vec<usize> = id.pi.iter().map(|&p| args[p]).collect();
            part.union(off_f + code, off_g + encode_tuple(&args_g, a.domain_size));
        }
    }
    let (qs, to_class) = quotient(&pre, &mut part)?;
    let mut labels = vec![None; qs.domain_size];
    for (si, s) in c.symbols.iter().enumerate() {
        for code in 0..a.domain_size.pow(s.arity as u32) {
            let cls = to_class[offsets[si] + code];
            if labels[cls].is_none() {
                labels[cls] = Some(VertexLabel {
                    symbol: s.name.clone(),
                    args: decode_tuple(code, a.domain_size, s.arity),
                });
            }
        }
    }
    let qs = Structure::new(
        format!("ind_{}_{}", c.name, a.name),
        qs.domain_size,
        qs.signature,
        qs.relations,
    )?;
    let map = LabelMap {
        domain_size: a.domain_size,
        blocks: c
            .symbols
            .iter()
            .zip(&offsets)
            .map(|(s, &o)| (s.name.clone(), s.arity, o))
            .collect(),
        to_class,
        labels: labels.into_iter().map(|l| l.unwrap()).collect(),
    };
    Ok((qs, map))
}

#[derive(Debug, Clone)]
pub enum CheckOutcome {
    Witness(ConditionWitness),
    Unsat { nodes: u64 },
    /// UNSAT certified by a clique in the indicator graph alone.
    CliqueUnsat { vertices: Vec<usize> },
    Unknown { budget: u64 },
}

impl CheckOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, CheckOutcome::Witness(_))
    }
}

/// Decide whether Pol(t) satisfies c by solving the indicator instance over
/// t.b, decoding the homomorphism and re-verifying everything it claims.
pub fn check_condition_in_pol(
    c: &MinorCondition,
    t: &PromiseTemplate,
    opts: &SearchOpts,
    cap: &SizeCap,
) -> Result<CheckOutcome> {
    let (inst, map) = condition_to_instance(c, &t.a, cap)?;
    match find_hom_counted(&inst, &t.b, opts) {
        Ok((Some(h), _)) => {
            let witness = decode_witness(c, t, &map, &h)?;
            verify_witness(c, t, &witness)?;
            Ok(CheckOutcome::Witness(witness))
        }
        Ok((None, nodes)) => Ok(CheckOutcome::Unsat { nodes }),
        Err(Error::Budget { nodes }) => Ok(CheckOutcome::Unknown { budget: nodes }),
        Err(e) => Err(e),
    }
}

/// zeta(f)(a_1..a_n) = h(v_{f(a_1..a_n)}).
fn decode_witness(
    c: &MinorCondition,
    t: &PromiseTemplate,
    map: &LabelMap,
    h: &[usize],
) -> Result<ConditionWitness> {
    let mut assignment = BTreeMap::new();
    for s in &c.symbols {
        let size = t.a.domain_size.pow(s.arity as u32);
        let values = (0..size)
            .map(|code| {
                h[map
                    .vertex_of(&s.name, &decode_tuple(code, t.a.domain_size, s.arity))
                    .unwrap()]
            })
            .collect();
        assignment.insert(
            s.name.clone(),
            FunctionTable::new(&s.name, t.a.domain_size, t.b.domain_size, s.arity, values)?,
        );
    }
    Ok(ConditionWitness { assignment })
}

/// Independent verification: every table a polymorphism of t, every identity
/// holding pointwise.
pub fn verify_witness(
    c: &MinorCondition,
    t: &PromiseTemplate,
    w: &ConditionWitness,
) -> Result<()> {
    for s in &c.symbols {
        let table = w
            .assignment
            .get(&s.name)
            .ok_or_else(|| Error::Invalid(format!("witness misses symbol {}", s.name)))?;
        if !is_polymorphism(table, t)?.is_ok() {
            return Err(Error::Invalid(format!("{} is not a polymorphism", s.name)));
        }
    }
    if !witness_satisfies(c, &w.assignment)? {
        return Err(Error::Invalid("witness violates an identity".into()));
    }
    Ok(())
}

/// Symmetric loop-free adjacency of the graph's (first) binary relation.
fn adjacency(g: &Structure) -> Result<Vec<Vec<bool>>> {
    let rel = g
        .signature
        .relations
        .iter()
        .position(|r| r.arity == 2)
        .ok_or_else(|| Error::Invalid(format!("{} has no binary relation", g.name)))?;
    let mut adj = vec![vec![false; g.domain_size]; g.domain_size];
    for t in &g.relations[rel] {
        if t[0] != t[1] && g.contains(rel, &[t[1], t[0]]) {
            adj[t[0]][t[1]] = true;
        }
    }
    Ok(adj)
}

pub fn is_clique(g: &Structure, vertices: &[usize]) -> Result<bool> {
    let adj = adjacency(g)?;
    if vertices.iter().any(|&v| v >= g.domain_size) {
        return Ok(false);
    }
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            if u == v || !adj[u][v] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A clique of exactly `size` vertices, found greedily first and by exact
/// branch-and-bound on a miss; `None` if no such clique exists.
pub fn clique_certificate(
    g: &Structure,
    size: usize,
    node_budget: Option<u64>,
) -> Result<Option<Vec<usize>>> {
    if size == 0 {
        return Ok(Some(Vec::new()));
    }
    let adj = adjacency(g)?;
    let n = g.domain_size;
    let mut order: Vec<usize> = (0..n).collect();
    let degree: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
    order.sort_by_key(|&v| (usize::MAX - degree[v], v));

    // Greedy pass: absorb vertices compatible with the clique so far.
    let mut greedy: Vec<usize> = Vec::new();
    for &v in &order {
        if greedy.iter().all(|&u| adj[u][v]) {
            greedy.push(v);
            if greedy.len() == size {
                return Ok(Some(greedy));
            }
        }
    }

    // Exact search over candidate sets, in vertex order for determinism.
    fn dfs(
        adj: &[Vec<bool>],
        clique: &mut Vec<usize>,
        cands: &[usize],
        size: usize,
        nodes: &mut u64,
        budget: Option<u64>,
    ) -> Result<bool> {
        if clique.len() == size {
            return Ok(true);
        }
        if clique.len() + cands.len() < size {
            return Ok(false);
        }
        for (i, &v) in cands.iter().enumerate() {
            *nodes += 1;
            if let Some(b) = budget {
                if *nodes > b {
                    return Err(Error::Budget { nodes: *nodes });
                }
            }
            let rest: Vec<usize> = cands[i + 1..].iter().copied().filter(|&u| adj[v][u]).collect();
            clique.push(v);
            if dfs(adj, clique, &rest, size, nodes, budget)? {
                return Ok(true);
            }
            clique.pop();
        }
        Ok(false)
    }
    let all: Vec<usize> = (0..n).collect();
    let mut clique = Vec::new();
    let mut nodes = 0;
    if dfs(&adj, &mut clique, &all, size, &mut nodes, node_budget)? {
        debug_assert!(is_clique(g, &clique)?);
        Ok(Some(clique))
    } else {
        Ok(None)
    }
}

/// Self-contained JSON certificate for a condition check.
pub fn certificate_json(
    c: &MinorCondition,
    t: &PromiseTemplate,
    outcome: &CheckOutcome,
) -> serde_json::Value {
    match outcome {
        CheckOutcome::Witness(w) => {
            let tables: BTreeMap<&String, &Vec<usize>> =
                w.assignment.iter().map(|(k, v)| (k, &v.values)).collect();
            let verification: Vec<_> = c
                .identities
                .iter()
                .map(|id| {
                    let f = &w.assignment[&c.symbols[id.lhs].name];
                    let g = &w.assignment[&c.symbols[id.rhs].name];
                    let ok = crate::minionlab::minor_of(g, &id.pi, f.arity)
                        .map(|m| m.values == f.values)
                        .unwrap_or(false);
                    json!({
                        "lhs": c.symbols[id.lhs].name,
                        "rhs": c.symbols[id.rhs].name,
                        "status": if ok { "pass" } else { "fail" },
                    })
                })
                .collect();
            json!({"kind": "witness", "tables": tables, "verification": verification})
        }
        CheckOutcome::Unsat { nodes } => {
            json!({"kind": "unsat", "nodes": nodes, "template": [t.a.name, t.b.name]})
        }
        CheckOutcome::CliqueUnsat { vertices } => {
            json!({"kind": "clique", "clique_vertices": vertices})
        }
        CheckOutcome::Unknown { budget } => json!({"kind": "unknown", "budget": budget}),
    }
}
