//! Monte Carlo samplers used as statistical cross-checks of the exact laws.
//! Nothing produced here certifies anything.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::arith::{pow, to_f64, Rational};
use crate::error::{parse_err, Error, Result};
use crate::graph::{cycle_basis_of, cycle_space_basis, EdgeSet, Graph};
use crate::measures::{Dist, Model};

pub const RNG_ALGORITHM: &str = "ChaCha8Rng";

/// Cycle dimension up to which loop samples are drawn exactly from the
/// enumerated span rather than by Glauber dynamics.
pub const EXACT_DIMENSION: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub sweeps: u64,
    pub burn_in: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            sweeps: 10_000,
            burn_in: 100,
        }
    }
}

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_x(x: &Rational) -> Result<()> {
    if *x < Rational::zero() || *x >= Rational::one() {
        return Err(Error::OutOfRange(format!("x = {x} must lie in [0, 1)")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Exact,
    Glauber,
}

/// Glauber dynamics on cycle-basis coordinates: propose flipping one basis
/// cycle `c` and accept with probability `min(1, x^{|w ^ c| - |w|})`.
#[derive(Clone, Debug)]
pub struct LoopChain {
    basis: Vec<EdgeSet>,
    x: f64,
    state: EdgeSet,
}

impl LoopChain {
    pub fn new(g: &Graph, x: &Rational) -> Result<Self> {
        check_x(x)?;
        Ok(LoopChain {
            basis: cycle_space_basis(g).cycles().to_vec(),
            x: to_f64(x),
            state: EdgeSet::EMPTY,
        })
    }

    pub fn state(&self) -> EdgeSet {
        self.state
    }

    /// One proposal; returns whether it was accepted.
    pub fn step<R: Rng>(&mut self, rng: &mut R) -> bool {
        if self.basis.is_empty() {
            return false;
        }
        let c = self.basis[rng.random_range(0..self.basis.len())];
        let next = self.state ^ c;
        let delta = next.len() as i32 - self.state.len() as i32;
        if delta <= 0 || rng.random::<f64>() < self.x.powi(delta) {
            self.state = next;
            return true;
        }
        false
    }

    /// As many proposals as there are basis cycles.
    pub fn sweep<R: Rng>(&mut self, rng: &mut R) {
        for _ in 0..self.basis.len() {
            self.step(rng);
        }
    }
}

#[derive(Clone, Debug)]
enum Engine {
    Exact {
        states: Vec<EdgeSet>,
        cumulative: Vec<f64>,
    },
    Chain(LoopChain),
}

/// Source of loop-model samples on one graph.
#[derive(Clone, Debug)]
pub struct LoopSampler {
    engine: Engine,
    rng: ChaCha8Rng,
    burned: bool,
    burn_in: u64,
}

impl LoopSampler {
    pub fn new(
        g: &Graph,
        x: &Rational,
        method: Method,
        rng: ChaCha8Rng,
        burn_in: u64,
    ) -> Result<Self> {
        check_x(x)?;
        let basis = cycle_space_basis(g);
        let exact = match method {
            Method::Exact => true,
            Method::Glauber => false,
            Method::Auto => basis.dimension() <= EXACT_DIMENSION,
        };
        let engine = if exact {
            if basis.dimension() > EXACT_DIMENSION {
                return Err(Error::CapExceeded {
                    what: "cycle dimension for exact sampling",
                    size: basis.dimension(),
                    cap: EXACT_DIMENSION,
                });
            }
            let xf = to_f64(x);
            let states: Vec<EdgeSet> = basis.span().collect();
            let mut acc = 0.0;
            let cumulative = states
                .iter()
                .map(|w| {
                    acc += xf.powi(w.len() as i32);
                    acc
                })
                .collect();
            Engine::Exact { states, cumulative }
        } else {
            Engine::Chain(LoopChain::new(g, x)?)
        };
        Ok(LoopSampler {
            engine,
            rng,
            burned: false,
            burn_in,
        })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.engine, Engine::Exact { .. })
    }

    /// Next sample: an exact draw, or the chain state after one more sweep.
    pub fn next_sample(&mut self) -> EdgeSet {
        match &mut self.engine {
            Engine::Exact { states, cumulative } => {
                let total = *cumulative.last().unwrap();
                let u = self.rng.random::<f64>() * total;
                let i = cumulative
                    .partition_point(|&c| c <= u)
                    .min(states.len() - 1);
                states[i]
            }
            Engine::Chain(chain) => {
                if !self.burned {
                    for _ in 0..self.burn_in {
                        chain.sweep(&mut self.rng);
                    }
                    self.burned = true;
                }
                chain.sweep(&mut self.rng);
                chain.state()
            }
        }
    }
}

/// `cfg.sweeps` loop samples after `cfg.burn_in` sweeps of burn-in (exact
/// draws when the cycle dimension allows it).
pub fn sample_loop_mcmc(
    g: &Graph,
    x: &Rational,
    cfg: &SamplerConfig,
    method: Method,
) -> Result<Vec<EdgeSet>> {
    let mut s = LoopSampler::new(g, x, method, stream_rng(cfg.seed, 0), cfg.burn_in)?;
    Ok((0..cfg.sweeps).map(|_| s.next_sample()).collect())
}

/// A model, optionally pushed forward to a uniformly chosen even subgraph of
/// each sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoupledModel {
    pub model: Model,
    pub uniform_even: bool,
}

impl CoupledModel {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag.strip_prefix("uniform-even:") {
            Some(inner) => Ok(CoupledModel {
                model: Model::parse(inner)?,
                uniform_even: true,
            }),
            None => Ok(CoupledModel {
                model: Model::parse(tag)?,
                uniform_even: false,
            }),
        }
    }

    pub fn tag(&self) -> String {
        if self.uniform_even {
            format!("uniform-even:{}", self.model.tag())
        } else {
            self.model.tag().to_string()
        }
    }
}

fn loop_layers(model: Model) -> u64 {
    match model {
        Model::Bernoulli => 0,
        Model::Loop | Model::SingleCurrent | Model::RandomCluster => 1,
        Model::DoubleLoop | Model::DoubleCurrent | Model::DoubleCluster => 2,
    }
}

fn percolation(model: Model, x: f64) -> f64 {
    match model {
        Model::Loop | Model::DoubleLoop => 0.0,
        Model::Bernoulli | Model::RandomCluster => x,
        Model::SingleCurrent => 1.0 - (1.0 - x * x).sqrt(),
        Model::DoubleCurrent => x * x,
        Model::DoubleCluster => x * (2.0 - x),
    }
}

/// Samples of `model` built as a union of independent loop samples and a
/// Bernoulli layer, each from its own stream of the seeded generator.
pub fn sample_coupled(
    model: CoupledModel,
    g: &Graph,
    x: &Rational,
    cfg: &SamplerConfig,
) -> Result<Vec<EdgeSet>> {
    check_x(x)?;
    let layers = loop_layers(model.model);
    let mut loops = (0..layers)
        .map(|k| LoopSampler::new(g, x, Method::Auto, stream_rng(cfg.seed, k), cfg.burn_in))
        .collect::<Result<Vec<_>>>()?;
    let p = percolation(model.model, to_f64(x));
    let mut rng = stream_rng(cfg.seed, 16);
    let edges = g.edge_count();
    let mut out = Vec::with_capacity(cfg.sweeps as usize);
    for _ in 0..cfg.sweeps {
        let mut w = loops
            .iter_mut()
            .fold(EdgeSet::EMPTY, |acc, s| acc | s.next_sample());
        if p > 0.0 {
            for e in 0..edges {
                if rng.random::<f64>() < p {
                    w = w.with(e);
                }
            }
        }
        if model.uniform_even {
            // a uniform subset of the basis of w sums to a uniform even subgraph of w
            let mut even = EdgeSet::EMPTY;
            for c in cycle_basis_of(g, w).cycles() {
                if rng.random::<bool>() {
                    even = even ^ *c;
                }
            }
            w = even;
        }
        out.push(w);
    }
    Ok(out)
}

/// Exact transition matrix of the cycle-flip chain over the even subgraphs,
/// listed in span order.
pub fn glauber_transition_matrix(
    g: &Graph,
    x: &Rational,
) -> Result<(Vec<EdgeSet>, Vec<Vec<Rational>>)> {
    check_x(x)?;
    let basis = cycle_space_basis(g);
    let states: Vec<EdgeSet> = basis.span().collect();
    if basis.dimension() > 12 {
        return Err(Error::CapExceeded {
            what: "cycle dimension for the transition matrix",
            size: basis.dimension(),
            cap: 12,
        });
    }
    let index: BTreeMap<EdgeSet, usize> = states.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let d = Rational::from_integer(basis.dimension().max(1).into());
    let mut m = vec![vec![Rational::zero(); states.len()]; states.len()];
    for (i, &w) in states.iter().enumerate() {
        let mut stay = Rational::one();
        for c in basis.cycles() {
            let next = w ^ *c;
            let delta = next.len() as i64 - w.len() as i64;
            let accept = if delta <= 0 {
                Rational::one()
            } else {
                pow(x, delta as u64)
            };
            let pr = accept / &d;
            stay -= &pr;
            m[i][index[&next]] += pr;
        }
        m[i][i] += stay;
    }
    Ok((states, m))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson goodness-of-fit test of `samples` against the exact law `d`.
/// Cells with expected count below 5 are pooled; samples outside the support
/// make the test fail outright.
pub fn chi_square(samples: &[EdgeSet], d: &Dist) -> ChiSquare {
    let n = samples.len() as f64;
    let mut counts: BTreeMap<EdgeSet, u64> = BTreeMap::new();
    for &s in samples {
        *counts.entry(s).or_default() += 1;
    }
    let outside = counts.keys().any(|w| d.weight(*w).is_zero());
    if outside || samples.is_empty() {
        return ChiSquare {
            statistic: f64::INFINITY,
            dof: 0,
            p_value: 0.0,
        };
    }
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut pooled_e, mut pooled_o) = (0.0, 0.0);
    for (w, p) in d.probabilities() {
        let e = to_f64(&p) * n;
        let o = counts.get(&w).copied().unwrap_or(0) as f64;
        if e < 5.0 {
            pooled_e += e;
            pooled_o += o;
        } else {
            cells.push((e, o));
        }
    }
    if pooled_e > 0.0 {
        cells.push((pooled_e, pooled_o));
    }
    let statistic: f64 = cells.iter().map(|(e, o)| (o - e) * (o - e) / e).sum();
    let dof = cells.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).unwrap().cdf(statistic)
    };
    ChiSquare {
        statistic,
        dof,
        p_value,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DumpHeader {
    pub model: String,
    pub x: String,
    pub config: SamplerConfig,
}

/// Writes one hex bitmask per line under a `#` header naming the generator.
pub fn write_dump<W: Write>(
    mut w: W,
    header: &DumpHeader,
    samples: &[EdgeSet],
) -> std::io::Result<()> {
    writeln!(w, "# rng: {RNG_ALGORITHM}")?;
    writeln!(w, "# seed: {}", header.config.seed)?;
    writeln!(w, "# sweeps: {}", header.config.sweeps)?;
    writeln!(w, "# burn-in: {}", header.config.burn_in)?;
    writeln!(w, "# model: {}", header.model)?;
    writeln!(w, "# x: {}", header.x)?;
    for s in samples {
        writeln!(w, "{}", s.to_hex())?;
    }
    Ok(())
}

pub fn read_dump<R: BufRead>(r: R) -> Result<Vec<EdgeSet>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| parse_err("sample dump", e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(EdgeSet::from_hex(line).ok_or_else(|| parse_err(line, "expected a hex bitmask"))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::graph::generalized_theta;
    use crate::measures::loop_o1;
    use std::sync::Arc;

    #[test]
    fn chain_states_stay_even() {
        let g = generalized_theta(&[2, 1, 3, 2], None).unwrap();
        let mut chain = LoopChain::new(&g, &rat(3, 4)).unwrap();
        let mut rng = stream_rng(7, 0);
        for _ in 0..500 {
            chain.step(&mut rng);
            assert!(g.is_even(chain.state()));
        }
    }

    #[test]
    fn tree_only_has_the_empty_state() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        let cfg = SamplerConfig {
            seed: 1,
            sweeps: 50,
            burn_in: 5,
        };
        for method in [Method::Exact, Method::Glauber] {
            let s = sample_loop_mcmc(&g, &rat(1, 2), &cfg, method).unwrap();
            assert!(s.iter().all(|w| w.is_empty()));
        }
    }

    #[test]
    fn detailed_balance_on_the_theta_graph() {
        let g = generalized_theta(&[1, 1, 1], None).unwrap();
        let x = rat(2, 5);
        let (states, m) = glauber_transition_matrix(&g, &x).unwrap();
        assert_eq!(states.len(), 4);
        let pi: Vec<Rational> = states.iter().map(|w| pow(&x, w.len() as u64)).collect();
        for i in 0..4 {
            assert_eq!(
                m[i].iter().fold(Rational::zero(), |a, v| a + v),
                Rational::one()
            );
            for j in 0..4 {
                assert_eq!(&pi[i] * &m[i][j], &pi[j] * &m[j][i]);
            }
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let g = generalized_theta(&[1, 2, 2], None).unwrap();
        let cfg = SamplerConfig {
            seed: 42,
            sweeps: 200,
            burn_in: 10,
        };
        let model = CoupledModel::parse("double-current").unwrap();
        let a = sample_coupled(model, &g, &rat(1, 2), &cfg).unwrap();
        let b = sample_coupled(model, &g, &rat(1, 2), &cfg).unwrap();
        assert_eq!(a, b);
        let c = sample_coupled(model, &g, &rat(1, 2), &SamplerConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn glauber_chain_fits_the_loop_law() {
        let g = Arc::new(generalized_theta(&[1, 1, 1], None).unwrap());
        let x = rat(1, 2);
        let cfg = SamplerConfig {
            seed: 3,
            sweeps: 20_000,
            burn_in: 50,
        };
        let s = sample_loop_mcmc(&g, &x, &cfg, Method::Glauber).unwrap();
        let fit = chi_square(&s, &loop_o1(&g, &x).unwrap());
        assert!(fit.p_value > 0.001, "{fit:?}");
    }

    #[test]
    fn dump_round_trip() {
        let header = DumpHeader {
            model: "loop".into(),
            x: "1/2".into(),
            config: SamplerConfig::default(),
        };
        let samples = vec![EdgeSet::from_bits(0b101), EdgeSet::EMPTY];
        let mut buf = Vec::new();
        write_dump(&mut buf, &header, &samples).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# rng: ChaCha8Rng\n"));
        assert_eq!(read_dump(buf.as_slice()).unwrap(), samples);
    }

    #[test]
    fn unknown_model_tag() {
        assert!(CoupledModel::parse("uniform-even:nope").is_err());
        assert_eq!(
            CoupledModel::parse("uniform-even:loop").unwrap().tag(),
            "uniform-even:loop"
        );
    }
}
