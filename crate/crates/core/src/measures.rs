//! Exact finitely supported laws on edge configurations and the union
//! couplings that build the loop-O(1), random current and random cluster
//! measures.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{sqrt_exact, Rational};
use crate::error::{Error, Result};
use crate::events::Event;
use crate::graph::{cycle_basis_of, even_subgraphs, EdgeSet, Graph};

/// Law on configurations stored as nonnegative weights plus their total `Z`.
///
/// Keeping `Z` explicit lets unnormalised quantities such as `Z * P(X)` be
/// read off directly. Only configurations of positive weight are stored.
#[derive(Clone, Debug)]
pub struct Dist {
    graph: Arc<Graph>,
    weights: BTreeMap<EdgeSet, Rational>,
    z: Rational,
}

/// Weights rescaled to integers over a common denominator.
#[derive(Clone, Debug)]
pub struct IntegerWeights {
    pub sets: Vec<EdgeSet>,
    pub weights: Vec<BigInt>,
    pub total: BigInt,
}

impl Dist {
    pub fn from_weights(
        graph: Arc<Graph>,
        weights: BTreeMap<EdgeSet, Rational>,
        z: Rational,
    ) -> Result<Self> {
        let mut sum = Rational::zero();
        for (w, v) in &weights {
            graph.check_edge_set(*w)?;
            if v.is_negative() {
                return Err(Error::OutOfRange(format!("negative weight {v} at {w}")));
            }
            sum += v;
        }
        if !z.is_positive() || sum != z {
            return Err(Error::OutOfRange(format!(
                "weights sum to {sum} but Z = {z}"
            )));
        }
        Ok(Dist::assemble(graph, weights, z))
    }

    fn assemble(graph: Arc<Graph>, mut weights: BTreeMap<EdgeSet, Rational>, z: Rational) -> Self {
        weights.retain(|_, v| !v.is_zero());
        Dist { graph, weights, z }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    /// Support in increasing bitmask order.
    pub fn support(&self) -> impl Iterator<Item = (EdgeSet, &Rational)> {
        self.weights.iter().map(|(&w, v)| (w, v))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, w: EdgeSet) -> Rational {
        self.weights.get(&w).cloned().unwrap_or_else(Rational::zero)
    }

    /// The normaliser `Z`.
    pub fn normalizer(&self) -> &Rational {
        &self.z
    }

    pub fn probability(&self, w: EdgeSet) -> Rational {
        self.weight(w) / &self.z
    }

    pub fn probabilities(&self) -> BTreeMap<EdgeSet, Rational> {
        self.weights
            .iter()
            .map(|(&w, v)| (w, v / &self.z))
            .collect()
    }

    /// Same law with `Z = 1`.
    pub fn normalized(&self) -> Dist {
        Dist {
            graph: self.graph.clone(),
            weights: self.probabilities(),
            z: Rational::one(),
        }
    }

    /// Exact equality of the underlying probability laws.
    pub fn same_law(&self, other: &Dist) -> bool {
        *self.graph == *other.graph
            && self.weights.len() == other.weights.len()
            && self.weights.iter().all(|(w, v)| {
                other
                    .weights
                    .get(w)
                    .is_some_and(|u| v * &other.z == u * &self.z)
            })
    }

    /// Weights scaled by the least common denominator, so sums and
    /// comparisons can run on integers.
    pub fn integer_weights(&self) -> IntegerWeights {
        let lcm = self
            .weights
            .values()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let mut total = BigInt::zero();
        let mut sets = Vec::with_capacity(self.weights.len());
        let mut weights = Vec::with_capacity(self.weights.len());
        for (&w, v) in &self.weights {
            let scaled = v.numer() * (&lcm / v.denom());
            total += &scaled;
            sets.push(w);
            weights.push(scaled);
        }
        IntegerWeights {
            sets,
            weights,
            total,
        }
    }
}

fn check_unit(name: &str, v: &Rational, allow_one: bool) -> Result<()> {
    let one = Rational::one();
    if v.is_negative() || v > &one || (!allow_one && v == &one) {
        return Err(Error::OutOfRange(format!("{name} = {v}")));
    }
    Ok(())
}

fn powers(base: &Rational, up_to: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(up_to + 1);
    let mut acc = Rational::one();
    for _ in 0..=up_to {
        out.push(acc.clone());
        acc *= base;
    }
    out
}

pub fn point_mass(g: &Arc<Graph>, w: EdgeSet) -> Result<Dist> {
    g.check_edge_set(w)?;
    Ok(Dist::assemble(
        g.clone(),
        BTreeMap::from([(w, Rational::one())]),
        Rational::one(),
    ))
}

/// Independent Bernoulli(`p`) edge percolation.
pub fn bernoulli(g: &Arc<Graph>, p: &Rational) -> Result<Dist> {
    check_unit("p", p, true)?;
    g.check_subset_cap()?;
    let n = g.edge_count();
    let (pp, qq) = (powers(p, n), powers(&(Rational::one() - p), n));
    let weights = g
        .all_subsets()?
        .map(|w| (w, &pp[w.len()] * &qq[n - w.len()]))
        .collect();
    Ok(Dist::assemble(g.clone(), weights, Rational::one()))
}

/// Loop-O(1) model: weight `x^|g|` on each even subgraph `g`.
pub fn loop_o1(g: &Arc<Graph>, x: &Rational) -> Result<Dist> {
    check_unit("x", x, false)?;
    let evens = even_subgraphs(g)?;
    let xp = powers(x, g.edge_count());
    let weights: BTreeMap<EdgeSet, Rational> = evens
        .into_iter()
        .map(|w| (w, xp[w.len()].clone()))
        .collect();
    let z = weights.values().fold(Rational::zero(), |acc, v| acc + v);
    Ok(Dist::assemble(g.clone(), weights, z))
}

fn same_graph(d1: &Dist, d2: &Dist) -> Result<()> {
    if Arc::ptr_eq(&d1.graph, &d2.graph) || *d1.graph == *d2.graph {
        Ok(())
    } else {
        Err(Error::GraphMismatch)
    }
}

/// Law of `A ∪ B` for independent `A ~ d1`, `B ~ d2`, by iterating support
/// pairs. Keeps the product convention `Z = Z1 Z2`.
pub fn union(d1: &Dist, d2: &Dist) -> Result<Dist> {
    same_graph(d1, d2)?;
    let mut acc: HashMap<EdgeSet, Rational> = HashMap::new();
    for (a, wa) in d1.support() {
        for (b, wb) in d2.support() {
            *acc.entry(a | b).or_insert_with(Rational::zero) += wa * wb;
        }
    }
    Ok(Dist::assemble(
        d1.graph.clone(),
        acc.into_iter().collect(),
        &d1.z * &d2.z,
    ))
}

/// [`union`] renormalised to `Z = 1`.
pub fn union_normalized(d1: &Dist, d2: &Dist) -> Result<Dist> {
    union(d1, d2).map(|d| d.normalized())
}

/// `union(d, bernoulli(p))` without materialising the Bernoulli law: each
/// configuration `A` spreads over its supersets, with only the edges outside
/// `A` left to percolate.
pub fn union_bernoulli(d: &Dist, p: &Rational) -> Result<Dist> {
    check_unit("p", p, true)?;
    let g = &d.graph;
    g.check_subset_cap()?;
    let n = g.edge_count();
    let (pp, qq) = (powers(p, n), powers(&(Rational::one() - p), n));
    let full = g.full_set().bits();
    let mut acc: HashMap<EdgeSet, Rational> = HashMap::new();
    for (a, wa) in d.support() {
        let free = full & !a.bits();
        let k = free.count_ones() as usize;
        let mut extra = free;
        loop {
            let opened = extra.count_ones() as usize;
            let factor = &pp[opened] * &qq[k - opened];
            if !factor.is_zero() {
                *acc.entry(a | EdgeSet::from_bits(extra))
                    .or_insert_with(Rational::zero) += wa * factor;
            }
            if extra == 0 {
                break;
            }
            extra = (extra - 1) & free;
        }
    }
    Ok(Dist::assemble(
        g.clone(),
        acc.into_iter().collect(),
        d.z.clone(),
    ))
}

/// Coupling parameter `x` of the current measures, optionally with the
/// Pythagorean parameter `t`, `x = 2t / (1 + t^2)`, for which
/// `sqrt(1 - x^2) = (1 - t^2) / (1 + t^2)` is rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentParams {
    x: Rational,
    t: Option<Rational>,
}

impl CurrentParams {
    pub fn from_x(x: Rational) -> Self {
        CurrentParams { x, t: None }
    }

    pub fn from_t(t: Rational) -> Result<Self> {
        check_unit("t", &t, false)?;
        let one = Rational::one();
        let x = (&t + &t) / (&one + &t * &t);
        Ok(CurrentParams { x, t: Some(t) })
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn t(&self) -> Option<&Rational> {
        self.t.as_ref()
    }

    /// `sqrt(1 - x^2)`, exact. Works from `t` when given, otherwise only when
    /// `1 - x^2` happens to be a rational square.
    pub fn sqrt_one_minus_x2(&self) -> Result<Rational> {
        let one = Rational::one();
        if let Some(t) = &self.t {
            let t2 = t * t;
            return Ok((&one - &t2) / (&one + &t2));
        }
        sqrt_exact(&(&one - &self.x * &self.x))
            .ok_or_else(|| Error::NonPythagorean(self.x.to_string()))
    }

    /// Percolation parameter of the single current,
    /// `x^2 / (1 + sqrt(1 - x^2)) = 1 - sqrt(1 - x^2)`.
    pub fn single_current_p(&self) -> Result<Rational> {
        Ok(Rational::one() - self.sqrt_one_minus_x2()?)
    }
}

/// Traced sourceless single random current: `l_x ∪ P_p`, `p = 1 - sqrt(1 - x^2)`.
pub fn single_current(g: &Arc<Graph>, params: &CurrentParams) -> Result<Dist> {
    let p = params.single_current_p()?;
    union_bernoulli(&loop_o1(g, params.x())?, &p)
}

/// FK-Ising random cluster model: `l_x ∪ P_x`.
pub fn random_cluster(g: &Arc<Graph>, x: &Rational) -> Result<Dist> {
    union_bernoulli(&loop_o1(g, x)?, x)
}

/// `l_x ∪ l_x`.
pub fn double_loop(g: &Arc<Graph>, x: &Rational) -> Result<Dist> {
    let l = loop_o1(g, x)?;
    union(&l, &l)
}

/// Traced sourceless double random current: `l_x ∪ l_x ∪ P_{x^2}`.
pub fn double_current(g: &Arc<Graph>, x: &Rational) -> Result<Dist> {
    union_bernoulli(&double_loop(g, x)?, &(x * x))
}

/// Two independent random cluster samples: `l_x ∪ l_x ∪ P_{x(2-x)}`.
pub fn double_cluster(g: &Arc<Graph>, x: &Rational) -> Result<Dist> {
    let p = x * (Rational::from_integer(2.into()) - x);
    union_bernoulli(&double_loop(g, x)?, &p)
}

/// The double current written directly over configurations:
/// weight `|E(w)| * sum_{w1 ⊆ w even} x^|w1| x^(2|w \ w1|) (1 - x^2)^(|E| - |w|)`
/// with `Z` the square of the loop partition function, where `E(w)` is the
/// set of even subgraphs of `w`.
pub fn double_current_lis(g: &Arc<Graph>, x: &Rational) -> Result<Dist> {
    check_unit("x", x, false)?;
    g.check_subset_cap()?;
    let n = g.edge_count();
    let xp = powers(x, 2 * n);
    let rest = powers(&(Rational::one() - x * x), n);
    let cap = g.limits().cycle_dim;
    let mut weights = BTreeMap::new();
    for w in g.all_subsets()? {
        let basis = cycle_basis_of(g, w);
        if basis.dimension() > cap {
            return Err(Error::CapExceeded {
                what: "cycle space dimension",
                size: basis.dimension(),
                cap,
            });
        }
        let inner = basis.span().fold(Rational::zero(), |acc, w1| {
            acc + &xp[w1.len()] * &xp[2 * (w.len() - w1.len())]
        });
        let count = Rational::from_integer(BigInt::one() << basis.dimension());
        weights.insert(w, count * inner * &rest[n - w.len()]);
    }
    let loop_z = loop_o1(g, x)?.z;
    Ok(Dist::assemble(g.clone(), weights, &loop_z * &loop_z))
}

/// Law of a uniformly chosen even subgraph of a sample of `d`.
pub fn push_uniform_even(d: &Dist) -> Result<Dist> {
    let g = &d.graph;
    let cap = g.limits().cycle_dim;
    let mut acc: HashMap<EdgeSet, Rational> = HashMap::new();
    for (w, weight) in d.support() {
        let basis = cycle_basis_of(g, w);
        if basis.dimension() > cap {
            return Err(Error::CapExceeded {
                what: "cycle space dimension",
                size: basis.dimension(),
                cap,
            });
        }
        let share = weight / Rational::from_integer(BigInt::one() << basis.dimension());
        for eta in basis.span() {
            *acc.entry(eta).or_insert_with(Rational::zero) += &share;
        }
    }
    Ok(Dist::assemble(
        g.clone(),
        acc.into_iter().collect(),
        d.z.clone(),
    ))
}

/// Exact probability of an event.
pub fn prob(d: &Dist, ev: &Event) -> Result<Rational> {
    ev.validate(&d.graph)?;
    let g = &d.graph;
    let hit = d
        .support()
        .filter(|(w, _)| ev.holds(g, *w))
        .fold(Rational::zero(), |acc, (_, v)| acc + v);
    Ok(hit / &d.z)
}

/// The measures of the crate by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Bernoulli,
    Loop,
    SingleCurrent,
    RandomCluster,
    DoubleLoop,
    DoubleCurrent,
    DoubleCluster,
}

impl Model {
    pub const ALL: [Model; 7] = [
        Model::Bernoulli,
        Model::Loop,
        Model::SingleCurrent,
        Model::RandomCluster,
        Model::DoubleLoop,
        Model::DoubleCurrent,
        Model::DoubleCluster,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Model::Bernoulli => "bernoulli",
            Model::Loop => "loop",
            Model::SingleCurrent => "single-current",
            Model::RandomCluster => "random-cluster",
            Model::DoubleLoop => "double-loop",
            Model::DoubleCurrent => "double-current",
            Model::DoubleCluster => "double-cluster",
        }
    }

    pub fn parse(tag: &str) -> Result<Model> {
        Model::ALL
            .into_iter()
            .find(|m| m.tag() == tag)
            .ok_or_else(|| Error::UnknownModel(tag.to_string()))
    }

    /// Builds the model on `g`; Bernoulli percolation uses `p = x`.
    pub fn build(self, g: &Arc<Graph>, params: &CurrentParams) -> Result<Dist> {
        let x = params.x();
        match self {
            Model::Bernoulli => bernoulli(g, x),
            Model::Loop => loop_o1(g, x),
            Model::SingleCurrent => single_current(g, params),
            Model::RandomCluster => random_cluster(g, x),
            Model::DoubleLoop => double_loop(g, x),
            Model::DoubleCurrent => double_current(g, x),
            Model::DoubleCluster => double_cluster(g, x),
        }
    }
}
