//! Figure data: element elasticities as CSV rows.

use std::fmt;
use std::io::Write;
use std::ops::ControlFlow;

use puiseux_core::{factorization_count, for_each_length_profile, Error, PosRational, TruncatedMonoid};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marker {
    IntegerElement,
    /// `n + e` with `n = floor(x)` a nonzero integer element and `e` a
    /// uniquely factorable element.
    ShiftedElement,
    Other,
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Marker::IntegerElement => "integer-element",
            Marker::ShiftedElement => "shifted-element",
            Marker::Other => "other",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotRecord {
    pub element: PosRational,
    pub elasticity: PosRational,
    pub marker: Marker,
}

/// Rows produced before an optional failure; rows are exact even when
/// the cap cut the stream short.
#[derive(Debug)]
pub struct PlotData {
    pub records: Vec<PlotRecord>,
    pub error: Option<Error>,
}

fn marker(tm: &TruncatedMonoid, x: &PosRational) -> Marker {
    if x.is_integer() {
        return Marker::IntegerElement;
    }
    let n = PosRational::from_biguint(x.floor());
    if n.is_zero() || !tm.contains(&n) {
        return Marker::Other;
    }
    let eps = x.checked_sub(&n).expect("floor(x) <= x");
    // a cap of 1 fails as soon as a second factorization appears
    match factorization_count(tm, &eps, 1) {
        Ok(1) => Marker::ShiftedElement,
        _ => Marker::Other,
    }
}

/// One record per nonzero element `<= bound` with elasticity `> 1`, or
/// every nonzero element when `all` is set, ascending.
pub fn plot_data(tm: &TruncatedMonoid, bound: &PosRational, cap: u64, all: bool) -> PlotData {
    let mut records = Vec::new();
    let one = PosRational::one();
    let result = for_each_length_profile(tm, bound, cap, |e| {
        if let Some(r) = e.elasticity() {
            if all || r > one {
                let marker = marker(tm, &e.element);
                records.push(PlotRecord { element: e.element, elasticity: r, marker });
            }
        }
        ControlFlow::Continue(())
    });
    PlotData { records, error: result.err() }
}

/// CSV with header `element,elasticity,marker` (plus decimal columns when
/// requested), LF line endings, and a trailing `#` diagnostic line if the
/// data is partial.
pub fn write_csv(out: &mut dyn Write, data: &PlotData, decimal: bool) -> std::io::Result<()> {
    if decimal {
        out.write_all(b"element,elasticity,marker,element_decimal,elasticity_decimal\n")?;
    } else {
        out.write_all(b"element,elasticity,marker\n")?;
    }
    for r in &data.records {
        if decimal {
            writeln!(
                out,
                "{},{},{},{:.9},{:.9}",
                r.element,
                r.elasticity,
                r.marker,
                r.element.to_f64(),
                r.elasticity.to_f64()
            )?;
        } else {
            writeln!(out, "{},{},{}", r.element, r.elasticity, r.marker)?;
        }
    }
    if let Some(e) = &data.error {
        writeln!(out, "# partial output: {e}")?;
    }
    Ok(())
}
