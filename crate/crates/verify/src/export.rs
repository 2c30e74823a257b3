//! Weight samples as CSV for plotting: one row per grid point, entries row-major.

use std::io::Write;

use num_traits::Zero;
use xmop_exact::{parse_q, to_f64, Q};
use xmop_kernels::WeightSpec;

use crate::error::VerifyError;
use crate::numeric::kernel_at;
use crate::quad::unit_value;

/// `lo:hi:step`, inclusive of hi when it lies on the grid. Parsed exactly so that
/// 0.5-steps hit 0 on the nose.
pub fn parse_grid(s: &str) -> Result<Vec<Q>, VerifyError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(VerifyError::Usage(format!("grid must be lo:hi:step, got {s:?}")));
    };
    let p = |x: &str| {
        parse_decimal(x.trim()).ok_or_else(|| VerifyError::Usage(format!("bad grid value {x:?}")))
    };
    let (lo, hi, step) = (p(lo)?, p(hi)?, p(step)?);
    if step <= Q::zero() || hi < lo {
        return Err(VerifyError::Usage(format!("grid needs lo <= hi and step > 0, got {s:?}")));
    }
    let mut out = vec![];
    let mut t = lo;
    while t <= hi {
        out.push(t.clone());
        t = &t + &step;
    }
    Ok(out)
}

/// Rational from "p/q", an integer, or a finite decimal such as -2.25.
fn parse_decimal(s: &str) -> Option<Q> {
    if let Ok(q) = parse_q(s) {
        return Some(q);
    }
    let (neg, body) = s.strip_prefix('-').map_or((false, s), |b| (true, b));
    let (int, frac) = body.split_once('.')?;
    let digits = format!("{int}{frac}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let num: num_bigint::BigInt = digits.parse().ok()?;
    let den = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
    let q = Q::new(num, den);
    Some(if neg { -q } else { q })
}

/// Continuous part of W at t (zero off the closed support); normalized weights are divided
/// by the base unit.
pub fn weight_at(w: &WeightSpec, t: &Q) -> Result<Vec<f64>, VerifyError> {
    let n = w.size();
    let on_support = w.support.contains_open(t) || w.support.finite_ends().iter().any(|(c, _)| c == t);
    if !on_support {
        return Ok(vec![0.0; n * n]);
    }
    let k = kernel_at(&w.kernel, t);
    let scale = if w.normalized { unit_value(&w.family()?.moment_table(1)?.0) } else { 1.0 };
    let d = w.density.eval(t)?;
    Ok(d.entries().iter().map(|x| k * to_f64(x) / scale).collect())
}

pub fn write_weight_csv(w: &WeightSpec, grid: &[Q], out: impl Write) -> Result<usize, VerifyError> {
    let n = w.size();
    let mut wr = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    for i in 1..=n {
        for j in 1..=n {
            header.push(format!("entry_{i}{j}"));
        }
    }
    let csv_err = |e: csv::Error| VerifyError::Usage(format!("csv: {e}"));
    wr.write_record(&header).map_err(csv_err)?;
    for t in grid {
        let mut row = vec![to_f64(t).to_string()];
        row.extend(weight_at(w, t)?.into_iter().map(|x| x.to_string()));
        wr.write_record(&row).map_err(csv_err)?;
    }
    wr.flush().map_err(|e| VerifyError::Usage(format!("csv: {e}")))?;
    Ok(grid.len())
}
