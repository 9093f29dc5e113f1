use rand::seq::SliceRandom;
use rand::Rng;

use super::{Edge, LabelCoverInstance, Labeling};
use crate::error::{ensure_within, Error, Result};
use crate::projection::Projection;
use crate::rng::stream;

/// Random instance with a planted labeling that satisfies every edge.
///
/// Each left vertex gets `degree` distinct right neighbours; every right
/// vertex is covered. Projections are uniform subject to `π(l_v) = l_u`.
pub fn generate_planted(
    u_count: usize,
    v_count: usize,
    degree: usize,
    k: usize,
    m: usize,
    seed: u64,
) -> Result<(LabelCoverInstance, Labeling)> {
    if u_count == 0 || v_count == 0 || degree == 0 || k == 0 || m == 0 {
        return Err(Error::Config("all sizes must be positive".into()));
    }
    if k > m {
        return Err(Error::Config(format!("need k <= m, got k = {k}, m = {m}")));
    }
    if degree > v_count {
        return Err(Error::Config(format!("degree {degree} exceeds |V| = {v_count}")));
    }
    if degree * u_count < v_count {
        return Err(Error::Config(format!(
            "{u_count} left vertices of degree {degree} cannot cover {v_count} right vertices"
        )));
    }
    let mut rng = stream(seed, "planted", 0);

    let mut neighbours = vec![Vec::with_capacity(degree); u_count];
    let mut order: Vec<usize> = (0..v_count).collect();
    order.shuffle(&mut rng);
    for (idx, &v) in order.iter().enumerate() {
        neighbours[idx % u_count].push(v);
    }
    for list in neighbours.iter_mut() {
        while list.len() < degree {
            let v = rng.gen_range(0..v_count);
            if !list.contains(&v) {
                list.push(v);
            }
        }
        list.sort_unstable();
    }

    let left: Vec<usize> = (0..u_count).map(|_| rng.gen_range(0..k)).collect();
    let right: Vec<usize> = (0..v_count).map(|_| rng.gen_range(0..m)).collect();

    let mut edges = Vec::with_capacity(u_count * degree);
    for (u, list) in neighbours.iter().enumerate() {
        for &v in list {
            let map = (0..m)
                .map(|j| if j == right[v] { left[u] } else { rng.gen_range(0..k) })
                .collect();
            edges.push(Edge { u, v, pi: Projection::new(k, map)? });
        }
    }
    let inst = LabelCoverInstance::new(k, m, u_count, v_count, edges)?;
    Ok((inst, Labeling::new(left, right)))
}

/// Clause-variable game of a 3-CNF (DIMACS literals, `±var`).
///
/// Left vertices are the variables (sorted by index) with labels
/// false/true; right vertices are the clauses, labelled by one of their 7
/// satisfying assignments in increasing bit order.
pub fn from_3sat_base_game(cnf: &[[i64; 3]]) -> Result<LabelCoverInstance> {
    if cnf.is_empty() {
        return Err(Error::Input("CNF has no clauses and no variables".into()));
    }
    let mut vars: Vec<i64> = Vec::new();
    for (c, clause) in cnf.iter().enumerate() {
        let mut seen: Vec<i64> = Vec::with_capacity(3);
        for &lit in clause {
            if lit == 0 {
                return Err(Error::Input(format!("clause {} contains literal 0", c + 1)));
            }
            if seen.contains(&lit.abs()) {
                return Err(Error::Input(format!("clause {} repeats variable {}", c + 1, lit.abs())));
            }
            seen.push(lit.abs());
        }
        vars.extend(seen);
    }
    vars.sort_unstable();
    vars.dedup();

    let mut edges = Vec::with_capacity(3 * cnf.len());
    for (c, clause) in cnf.iter().enumerate() {
        // bit t of an assignment = truth value of the t-th variable of the clause
        let falsifying = clause
            .iter()
            .enumerate()
            .fold(0usize, |acc, (t, &lit)| if lit < 0 { acc | (1 << t) } else { acc });
        let satisfying: Vec<usize> = (0..8).filter(|&a| a != falsifying).collect();
        for (t, &lit) in clause.iter().enumerate() {
            let u = vars.binary_search(&lit.abs()).expect("variable collected above");
            let map = satisfying.iter().map(|&a| (a >> t) & 1).collect();
            edges.push(Edge { u, v: c, pi: Projection::new(2, map)? });
        }
    }
    edges.sort_by_key(|e| (e.u, e.v));
    LabelCoverInstance::new(2, 7, vars.len(), cnf.len(), edges)
}

/// The `r`-fold product game. Tuples are encoded in mixed radix with the
/// first coordinate most significant; edges follow lexicographic order of
/// edge tuples.
pub fn parallel_repetition(inst: &LabelCoverInstance, r: u32, cap: u128) -> Result<LabelCoverInstance> {
    if r == 0 {
        return Err(Error::Config("repetition count must be positive".into()));
    }
    let pow = |b: usize| (b as u128).checked_pow(r).unwrap_or(u128::MAX);
    ensure_within("right label set m^r", pow(inst.m()), cap)?;
    ensure_within("edge count |E|^r", pow(inst.edges().len()), cap)?;
    ensure_within(
        "projection table entries |E|^r * m^r",
        pow(inst.edges().len()).saturating_mul(pow(inst.m())),
        cap.saturating_mul(16),
    )?;
    let (k, m) = (inst.k(), inst.m());
    let big_k = pow(k) as usize;
    let big_m = pow(m) as usize;
    let r = r as usize;

    let digits = |mut idx: usize, base: usize| -> Vec<usize> {
        let mut out = vec![0; r];
        for slot in out.iter_mut().rev() {
            *slot = idx % base;
            idx /= base;
        }
        out
    };
    let encode = |ds: &[usize], base: usize| ds.iter().fold(0usize, |acc, &d| acc * base + d);

    let n_edges = pow(inst.edges().len()) as usize;
    let mut edges = Vec::with_capacity(n_edges);
    for tuple_idx in 0..n_edges {
        let parts: Vec<&Edge> = digits(tuple_idx, inst.edges().len())
            .into_iter()
            .map(|e| &inst.edges()[e])
            .collect();
        let us: Vec<usize> = parts.iter().map(|e| e.u).collect();
        let vs: Vec<usize> = parts.iter().map(|e| e.v).collect();
        let map = (0..big_m)
            .map(|label| {
                let js = digits(label, m);
                let is: Vec<usize> = parts.iter().zip(&js).map(|(e, &j)| e.pi.apply(j)).collect();
                encode(&is, k)
            })
            .collect();
        edges.push(Edge {
            u: encode(&us, inst.u_count()),
            v: encode(&vs, inst.v_count()),
            pi: Projection::new(big_k, map)?,
        });
    }
    LabelCoverInstance::new(
        big_k,
        big_m,
        pow(inst.u_count()) as usize,
        pow(inst.v_count()) as usize,
        edges,
    )
}

/// Lifts a base labeling to the `r`-fold product by labelling each tuple
/// with the tuple of labels.
pub fn lift_labeling(inst: &LabelCoverInstance, labeling: &Labeling, r: u32) -> Labeling {
    let lift = |labels: &[usize], count: usize, base: usize| -> Vec<usize> {
        let total = count.pow(r);
        (0..total)
            .map(|idx| {
                let mut rest = idx;
                let mut ds = vec![0; r as usize];
                for slot in ds.iter_mut().rev() {
                    *slot = rest % count;
                    rest /= count;
                }
                ds.iter().fold(0usize, |acc, &vtx| acc * base + labels[vtx])
            })
            .collect()
    };
    Labeling::new(
        lift(&labeling.left, inst.u_count(), inst.k()),
        lift(&labeling.right, inst.v_count(), inst.m()),
    )
}
