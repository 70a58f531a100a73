use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_traits::One;
use serde::Serialize;
use serde_json::json;

use crate::arith::monotone::first_decrease;
use crate::arith::{
    certify_decreasing_pair, sqrt_exact, to_fraction, to_scientific, Interval, PrecisionSchedule,
    Rational,
};
use crate::error::{parse_err, Error, Result};
use crate::measures::CurrentParams;
use crate::par_map;
use crate::theta::{l2_conn, l_conn, p_single_conn, SingleConn};

pub const DEFAULT_DIGITS: usize = 40;

/// Working precision bounds for enclosing single current values.
const START_BITS: u32 = 192;
const MAX_BITS: u32 = 1 << 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FigureModel {
    #[serde(rename = "l")]
    Loop,
    #[serde(rename = "P")]
    Single,
    #[serde(rename = "l2")]
    DoubleLoop,
}

impl FigureModel {
    pub fn tag(self) -> &'static str {
        match self {
            FigureModel::Loop => "l",
            FigureModel::Single => "P",
            FigureModel::DoubleLoop => "l2",
        }
    }
}

impl fmt::Display for FigureModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FigureModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l" => Ok(FigureModel::Loop),
            "P" => Ok(FigureModel::Single),
            "l2" => Ok(FigureModel::DoubleLoop),
            _ => Err(parse_err(s, "expected l, P or l2")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FigureValue {
    Exact(Rational),
    Enclosed(Interval),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigureRow {
    pub x: Rational,
    pub value: FigureValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecreaseEvidence {
    /// Exact rational values compared exactly.
    Exact { f1: Rational, f2: Rational },
    /// Disjoint enclosures at the given working precision.
    Enclosed { f1: Interval, f2: Interval },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigureDecrease {
    pub x1: Rational,
    pub x2: Rational,
    pub evidence: DecreaseEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigureData {
    pub model: FigureModel,
    pub n: u32,
    pub m: u32,
    pub digits: usize,
    pub rows: Vec<FigureRow>,
    pub decrease: Option<FigureDecrease>,
}

/// Exact value at Pythagorean `x`, otherwise an enclosure tight enough to
/// fix `digits` significant digits.
pub fn single_value(f: &SingleConn, x: &Rational, digits: usize) -> Result<FigureValue> {
    if sqrt_exact(&(Rational::one() - x * x)).is_some() {
        return Ok(FigureValue::Exact(
            f.eval(&CurrentParams::from_x(x.clone()))?,
        ));
    }
    let mut bits = START_BITS;
    loop {
        let v = f.eval_interval(x, bits)?;
        if v.common_scientific(digits).is_some() || bits >= MAX_BITS {
            return Ok(FigureValue::Enclosed(v));
        }
        bits *= 2;
    }
}

/// Tabulates `P(a <-> b)` on the counter graph for one model over `grid` and
/// certifies the first decrease between neighbouring grid points, if any.
pub fn figure(
    model: FigureModel,
    n: u32,
    m: u32,
    grid: &[Rational],
    digits: usize,
) -> Result<FigureData> {
    crate::arith::validate_grid(grid)?;
    let (rows, decrease) = match model {
        FigureModel::Loop | FigureModel::DoubleLoop => {
            let f = if model == FigureModel::Loop {
                l_conn(n, m)?
            } else {
                l2_conn(n, m)?
            };
            let values = par_map(grid, |x| f.eval(x))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let decrease = first_decrease(grid, &values).map(|p| FigureDecrease {
                x1: p.x1,
                x2: p.x2,
                evidence: DecreaseEvidence::Exact { f1: p.f1, f2: p.f2 },
            });
            let rows = grid
                .iter()
                .zip(values)
                .map(|(x, v)| FigureRow {
                    x: x.clone(),
                    value: FigureValue::Exact(v),
                })
                .collect();
            (rows, decrease)
        }
        FigureModel::Single => {
            let f = p_single_conn(n, m)?;
            let values = par_map(grid, |x| single_value(&f, x, digits))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let schedule = PrecisionSchedule {
                start_bits: 96,
                max_bits: 4096,
            };
            let decrease =
                certify_decreasing_pair(|x, bits| f.eval_interval(x, bits), grid, schedule)?.map(
                    |c| FigureDecrease {
                        x1: c.x1,
                        x2: c.x2,
                        evidence: DecreaseEvidence::Enclosed { f1: c.f1, f2: c.f2 },
                    },
                );
            let rows = grid
                .iter()
                .zip(values)
                .map(|(x, value)| FigureRow {
                    x: x.clone(),
                    value,
                })
                .collect();
            (rows, decrease)
        }
    };
    Ok(FigureData {
        model,
        n,
        m,
        digits,
        rows,
        decrease,
    })
}

fn decimal(v: &FigureValue, digits: usize) -> String {
    match v {
        FigureValue::Exact(r) => to_scientific(r, digits),
        FigureValue::Enclosed(i) => i
            .common_scientific(digits)
            .unwrap_or_else(|| to_scientific(&i.midpoint(), digits)),
    }
}

impl FigureData {
    /// RFC 4180 CSV: `x_num,x_den,x_decimal,value_decimal,value_exact`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "x_num,x_den,x_decimal,value_decimal,value_exact\r\n")?;
        for row in &self.rows {
            let exact = match &row.value {
                FigureValue::Exact(r) => to_fraction(r),
                FigureValue::Enclosed(_) => String::new(),
            };
            write!(
                w,
                "{},{},{},{},{}\r\n",
                row.x.numer(),
                row.x.denom(),
                to_scientific(&row.x, self.digits),
                decimal(&row.value, self.digits),
                exact
            )?;
        }
        Ok(())
    }

    pub fn sidecar(&self) -> serde_json::Value {
        let decrease = self.decrease.as_ref().map(|d| match &d.evidence {
            DecreaseEvidence::Exact { f1, f2 } => json!({
                "x1": to_fraction(&d.x1),
                "x2": to_fraction(&d.x2),
                "method": "exact",
                "f1": to_fraction(f1),
                "f2": to_fraction(f2),
                "f1_decimal": to_scientific(f1, self.digits),
                "f2_decimal": to_scientific(f2, self.digits),
            }),
            DecreaseEvidence::Enclosed { f1, f2 } => json!({
                "x1": to_fraction(&d.x1),
                "x2": to_fraction(&d.x2),
                "method": "interval",
                "precision_bits": f1.precision(),
                "f1_lower": to_scientific(&f1.lower(), self.digits),
                "f1_upper": to_scientific(&f1.upper(), self.digits),
                "f2_lower": to_scientific(&f2.lower(), self.digits),
                "f2_upper": to_scientific(&f2.upper(), self.digits),
            }),
        });
        json!({
            "model": self.model.tag(),
            "n": self.n,
            "m": self.m,
            "grid_points": self.rows.len(),
            "digits": self.digits,
            "certified_decrease": decrease,
        })
    }
}
