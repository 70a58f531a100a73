use crate::error::Result;
use crate::events::Event;
use crate::graph::{even_subgraphs, generalized_theta, theta_segments, EdgeSet, Graph};

use super::counter_graph;

/// One even subgraph of the counter graph, with its edge count written as
/// `n_coeff * n + m_coeff * m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterRow {
    pub label: String,
    pub subgraph: EdgeSet,
    pub n_coeff: u32,
    pub m_coeff: u32,
    pub edges: usize,
    pub connected: bool,
}

impl CounterRow {
    pub fn shape(&self) -> (u32, u32, bool) {
        (self.n_coeff, self.m_coeff, self.connected)
    }
}

/// `(n_coeff, m_coeff, marks connected)` for the eight even subgraphs, in
/// the order empty, `2n`, `2m`, four times `n + m`, `2n + 2m`.
pub const COUNTER_ROWS_EXPECTED: [(u32, u32, bool); 8] = [
    (0, 0, false),
    (2, 0, false),
    (0, 2, true),
    (1, 1, false),
    (1, 1, false),
    (1, 1, false),
    (1, 1, false),
    (2, 2, true),
];

const COUNTER_LABELS: [&str; 4] = ["n↑", "n↓", "m↑", "m↓"];

fn segment_mask(segs: &[EdgeSet], g: EdgeSet) -> u32 {
    segs.iter()
        .enumerate()
        .filter(|(_, s)| s.is_subset(g))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

fn label(mask: u32, names: &[&str]) -> String {
    if mask == 0 {
        return "∅".into();
    }
    (0..names.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| names[i])
        .collect::<Vec<_>>()
        .join("+")
}

/// Regenerates the eight even subgraphs of the counter graph by enumeration.
pub fn counter_subgraph_table(n: u32, m: u32) -> Result<Vec<CounterRow>> {
    let g = counter_graph(n, m)?;
    let segs = theta_segments(&[n, n, m, m]);
    let ev = Event::connect_marks(&g)?;
    let mut rows: Vec<(u32, CounterRow)> = even_subgraphs(&g)?
        .into_iter()
        .map(|w| {
            let mask = segment_mask(&segs, w);
            let n_coeff = (mask & 0b0011).count_ones();
            let m_coeff = (mask & 0b1100).count_ones();
            let rank = match (n_coeff, m_coeff) {
                (0, 0) => 0,
                (2, 0) => 1,
                (0, 2) => 2,
                (1, 1) => 3,
                _ => 4,
            };
            let row = CounterRow {
                label: label(mask, &COUNTER_LABELS),
                subgraph: w,
                n_coeff,
                m_coeff,
                edges: w.len(),
                connected: ev.holds(&g, w),
            };
            ((rank << 4) | mask, row)
        })
        .collect();
    rows.sort_by_key(|(k, _)| *k);
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

/// Whether an event holds on the union of each ordered pair of even subgraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTable {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<bool>>,
}

impl PairTable {
    fn build(g: &Graph, subgraphs: &[(String, EdgeSet)], ev: &Event) -> PairTable {
        PairTable {
            labels: subgraphs.iter().map(|(l, _)| l.clone()).collect(),
            cells: subgraphs
                .iter()
                .map(|(_, a)| {
                    subgraphs
                        .iter()
                        .map(|(_, b)| ev.holds(g, *a | *b))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn matches<const N: usize>(&self, expected: &[[bool; N]; N]) -> bool {
        self.cells.len() == N
            && self
                .cells
                .iter()
                .zip(expected)
                .all(|(row, exp)| row.as_slice() == exp.as_slice())
    }

    /// Grid rendering with `x` for cells where the event holds.
    pub fn render(&self) -> String {
        let width = self
            .labels
            .iter()
            .map(|l| l.chars().count())
            .max()
            .unwrap_or(1);
        let mut out = format!("{:width$}", "");
        for l in &self.labels {
            out.push_str(&format!(" | {l:width$}"));
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.cells) {
            out.push_str(&format!("{l:width$}"));
            for &c in row {
                out.push_str(&format!(" | {:width$}", if c { "x" } else { "" }));
            }
            out.push('\n');
        }
        out
    }
}

/// Rows and columns: empty, upper loop, lower loop, outer `2n` loop.
pub const LX1_EXPECTED: [[bool; 4]; 4] = [
    [false, true, false, false],
    [true, true, true, true],
    [false, true, false, true],
    [false, true, true, false],
];

pub const LX2_EXPECTED: [[bool; 4]; 4] = [
    [false, false, false, false],
    [false, false, true, true],
    [false, true, false, true],
    [false, true, true, false],
];

/// Rows and columns: empty, `2m`, `n↑+m↑`, `n↑+m↓`, `n↓+m↑`, `n↓+m↓`, `2n`,
/// `2n+2m`.
pub const LX3_EXPECTED: [[bool; 8]; 8] = {
    const T: bool = true;
    const F: bool = false;
    [
        [F, T, F, F, F, F, F, T],
        [T, T, T, T, T, T, T, T],
        [F, T, F, T, F, T, F, T],
        [F, T, T, F, T, F, F, T],
        [F, T, F, T, F, T, F, T],
        [F, T, T, F, T, F, F, T],
        [F, T, F, F, F, F, F, T],
        [T, T, T, T, T, T, T, T],
    ]
};

/// Pair table on `theta[n, m, n]` for the event that the upper loop is open
/// (`both = false`) or that both loops are open (`both = true`).
pub fn theta_pair_table(n: u32, m: u32, both: bool) -> Result<PairTable> {
    let g = generalized_theta(&[n, m, n], None)?;
    let s = theta_segments(&[n, m, n]);
    let subgraphs = vec![
        ("∅".to_string(), EdgeSet::EMPTY),
        ("n+m upper".to_string(), s[0] | s[1]),
        ("n+m lower".to_string(), s[1] | s[2]),
        ("2n".to_string(), s[0] | s[2]),
    ];
    let ev = if both {
        Event::all_open(g.full_set())
    } else {
        Event::all_open(s[0] | s[1])
    };
    Ok(PairTable::build(&g, &subgraphs, &ev))
}

/// Pair table on the counter graph for the connection of the marks.
pub fn counter_pair_table(n: u32, m: u32) -> Result<PairTable> {
    let g = counter_graph(n, m)?;
    let s = theta_segments(&[n, n, m, m]);
    let masks = [
        0b0000, 0b1100, 0b0101, 0b1001, 0b0110, 0b1010, 0b0011, 0b1111,
    ];
    let names = ["∅", "2m", "n↑+m↑", "n↑+m↓", "n↓+m↑", "n↓+m↓", "2n", "2n+2m"];
    let subgraphs: Vec<(String, EdgeSet)> = masks
        .iter()
        .zip(names)
        .map(|(&mask, name)| {
            let set = (0..4)
                .filter(|i| mask >> i & 1 == 1)
                .fold(EdgeSet::EMPTY, |acc, i| acc | s[i]);
            (name.to_string(), set)
        })
        .collect();
    Ok(PairTable::build(&g, &subgraphs, &Event::connect_marks(&g)?))
}
