//! Coordinate changes between overlapping charts together with the
//! pullback of the canonical one-form.

use std::collections::{HashSet, VecDeque};

use super::{AtlasError, ChartId, CotangentState, Scalar, Sheet, UConvention};
use crate::special::{lambert_w, WBranch};

use ChartId::*;

/// `r = x² = 1 + W(pq)` for a Kruskal–Szekeres state.
pub(crate) fn ks_radius<S: Scalar>(s: &CotangentState<S>) -> Result<S, AtlasError> {
    if let Some(x) = s.ks_x {
        return Ok(x * x);
    }
    if !S::IS_REAL {
        return Err(AtlasError::Invalid { chart: Ks, reason: "complex Kruskal point needs x" });
    }
    let z = (s.position[0] * s.position[1]).real_part();
    lambert_w(s.branch, z)
        .map(|w| S::from_f64(1.0 + w))
        .map_err(|_| AtlasError::Invalid { chart: Ks, reason: "pq outside the Lambert W domain" })
}

/// Charts sharing a direct transition with `chart`.
pub fn direct_neighbours(chart: ChartId) -> &'static [ChartId] {
    match chart {
        Schw => &[EfAdv, EfRet, Xt],
        EfAdv => &[Schw, Xu, Ks, EfRet, Yp],
        EfRet => &[Schw, Xv, Ks, EfAdv, Yq],
        Ks => &[EfAdv, EfRet, Xp, Xq],
        Xu => &[EfAdv, Xp, Xt],
        Xv => &[EfRet, Xq, Xt],
        Xt => &[Schw, Xu, Xv],
        Yp => &[EfAdv, Xp],
        Yq => &[EfRet, Xq],
        Xp => &[Xu, Ks, Yp],
        Xq => &[Xv, Ks, Yq],
    }
}

pub fn to_chart<S: Scalar>(state: &CotangentState<S>, target: ChartId) -> Result<CotangentState<S>, AtlasError> {
    to_chart_with(state, target, UConvention::default())
}

/// Maps `state` to `target` along the shortest chain of overlaps that
/// actually contain the point.
pub fn to_chart_with<S: Scalar>(
    state: &CotangentState<S>,
    target: ChartId,
    conv: UConvention,
) -> Result<CotangentState<S>, AtlasError> {
    state.validate()?;
    if state.chart == target {
        return Ok(*state);
    }
    let shift = conv.shift();
    let mut seen = HashSet::from([state.chart]);
    let mut queue = VecDeque::from([*state]);
    let mut direct_err = None;
    while let Some(cur) = queue.pop_front() {
        for &next in direct_neighbours(cur.chart) {
            if seen.contains(&next) {
                continue;
            }
            match edge(&cur, next, shift).and_then(|s| s.validate().map(|_| s)) {
                Ok(s) if next == target => return Ok(s),
                Ok(s) => {
                    seen.insert(next);
                    queue.push_back(s);
                }
                Err(e) => {
                    if next == target && cur.chart == state.chart {
                        direct_err = Some(e);
                    }
                }
            }
        }
    }
    Err(direct_err.unwrap_or(AtlasError::Overlap { from: state.chart, to: target, reason: "no overlap chain contains the point" }))
}

/// Exchanges the advanced and retarded charts. Outside the horizon this is
/// the ordinary overlap map. Beyond scri (`r < 0`) the same formula is the
/// overlap map composed with the reflection `(p, q) → (−p, −q)`; the flag
/// reports that case.
pub fn swap_null_family<S: Scalar>(
    s: &CotangentState<S>,
    conv: UConvention,
) -> Result<(CotangentState<S>, bool), AtlasError> {
    let to = match s.chart {
        EfAdv => EfRet,
        EfRet => EfAdv,
        other => return Err(overlap(other, other, "not an Eddington–Finkelstein chart")),
    };
    let y = s.position[1] + 1.0 / 3.0;
    if y.is_zero() {
        return Err(overlap(s.chart, to, "scri"));
    }
    let r = one::<S>() / y;
    if S::IS_REAL && r.real_part() > 0.0 && r.real_part() <= 1.0 {
        return Err(overlap(s.chart, to, "black- and white-hole interiors are disjoint"));
    }
    let fw = -(r * r * r) / (r - 1.0);
    let [a, b] = s.position;
    let [m1, m2] = s.momentum;
    let mut out = *s;
    out.chart = to;
    out.position = [(tortoise(r) + conv.shift()) * 2.0 - a, b];
    out.momentum = [-m1, m2 + m1 * fw * 2.0];
    Ok((out, S::IS_REAL && r.real_part() < 0.0))
}

/// The Kruskal reflection `(p, q; P, Q) → (−p, −q; −P, −Q)`, an isometry
/// exchanging quadrants I ↔ III and II ↔ IV.
pub fn reflect_kruskal<S: Scalar>(s: &CotangentState<S>) -> Result<CotangentState<S>, AtlasError> {
    if s.chart != Ks {
        return Err(AtlasError::Invalid { chart: s.chart, reason: "reflection acts on Kruskal states" });
    }
    let mut out = *s;
    out.position = s.position.map(|v| -v);
    out.momentum = s.momentum.map(|v| -v);
    Ok(out)
}

fn overlap(from: ChartId, to: ChartId, reason: &'static str) -> AtlasError {
    AtlasError::Overlap { from, to, reason }
}

/// True unless we are on the real slice and `v` is not strictly positive.
fn positive_or_complex<S: Scalar>(v: S) -> bool {
    !S::IS_REAL || v.real_part() > 0.0
}

/// `F(r) = r + ½ ln((r − 1)²)`; on the complex surface `r + ln(r − 1)`, so
/// that `e^{(u+v)/2} ∝ (r − 1)e^{r}` without a sign ambiguity.
fn tortoise<S: Scalar>(r: S) -> S {
    let d = r - 1.0;
    if S::IS_REAL {
        r + (d * d).ln() * 0.5
    } else {
        r + d.ln()
    }
}

/// The interior of the `t` charts is identified with the black-hole
/// quadrant; only the exterior is shared with the retarded charts.
fn retarded_t_overlap<S: Scalar>(r: S) -> bool {
    !S::IS_REAL || r.real_part() > 1.0
}

fn one<S: Scalar>() -> S {
    S::from_f64(1.0)
}

/// `x` on the sheet of `s` with `x² = r`.
fn sheet_root<S: Scalar>(r: S, sheet: Sheet) -> S {
    r.sqrt() * sheet.sign()
}

fn edge<S: Scalar>(s: &CotangentState<S>, to: ChartId, shift: f64) -> Result<CotangentState<S>, AtlasError> {
    let from = s.chart;
    let err = |reason| overlap(from, to, reason);
    let [a, b] = s.position;
    let [m1, m2] = s.momentum;
    let mut out = *s;
    out.chart = to;
    if from == Ks {
        out.ks_x = None;
    }
    let set = |out: &mut CotangentState<S>, c: [S; 4]| {
        out.position = [c[0], c[1]];
        out.momentum = [c[2], c[3]];
    };
    match (from, to) {
        (Schw, EfAdv) | (Schw, EfRet) => {
            let (t, r, tt, rr) = (a, b, m1, m2);
            if to == EfRet && !retarded_t_overlap(r) {
                return Err(err("interior t chart belongs to the advanced side"));
            }
            let fp = r / (r - 1.0);
            if to == EfAdv {
                let u = t + tortoise(r) + shift;
                set(&mut out, [u, one::<S>() / r - 1.0 / 3.0, tt, -(r * r * (rr - tt * fp))]);
            } else {
                let v = -t + tortoise(r) + shift;
                let vv = -tt;
                set(&mut out, [v, one::<S>() / r - 1.0 / 3.0, vv, r * r * (vv * fp - rr)]);
            }
        }
        (EfAdv, Schw) | (EfRet, Schw) => {
            let y = b + 1.0 / 3.0;
            if y.is_zero() {
                return Err(err("scri is at infinite r"));
            }
            let r = one::<S>() / y;
            if (r - 1.0).is_zero() {
                return Err(err("horizon"));
            }
            if from == EfRet && !retarded_t_overlap(r) {
                return Err(err("interior t chart belongs to the advanced side"));
            }
            let fp = r / (r - 1.0);
            let rr = m1 * fp - m2 / (r * r);
            if from == EfAdv {
                set(&mut out, [a - tortoise(r) - shift, r, m1, rr]);
            } else {
                set(&mut out, [tortoise(r) + shift - a, r, -m1, rr]);
            }
        }
        (Schw, Xt) => {
            if !positive_or_complex(b) {
                return Err(err("r ≤ 0 has no real x"));
            }
            let x = sheet_root(b, s.sheet);
            set(&mut out, [a, x, m1, x * m2 * 2.0]);
        }
        (Xt, Schw) => {
            let x = b;
            if x.is_zero() {
                return Err(err("x = 0"));
            }
            set(&mut out, [a, x * x, m1, m2 / (x * 2.0)]);
            out.sheet = Sheet::of(x).unwrap_or(s.sheet);
        }
        (EfAdv, Xu) | (EfRet, Xv) => {
            let y = b + 1.0 / 3.0;
            if y.is_zero() || !positive_or_complex(y) {
                return Err(err("x is not real beyond scri"));
            }
            let x = sheet_root(one::<S>() / y, s.sheet);
            set(&mut out, [a, x, m1, -(m2 * 2.0) / (x * x * x)]);
        }
        (Xu, EfAdv) | (Xv, EfRet) => {
            let x = b;
            if x.is_zero() {
                return Err(err("x = 0"));
            }
            set(&mut out, [a, one::<S>() / (x * x) - 1.0 / 3.0, m1, -(x * x * x * m2) * 0.5]);
            out.sheet = Sheet::of(x).unwrap_or(s.sheet);
        }
        (EfAdv, Ks) | (EfRet, Ks) => {
            let y = b + 1.0 / 3.0;
            if y.is_zero() {
                return Err(err("scri"));
            }
            let r = one::<S>() / y;
            let e = (r - 1.0).exp();
            let g = r * r * r * e;
            let own = ((a - shift - 1.0) * 0.5).exp();
            let other = (r - 1.0) * e / own;
            let (n1, n2) = (m1 * 2.0 / own - m2 * other / g, -(m2 * own) / g);
            if from == EfAdv {
                set(&mut out, [own, other, n1, n2]);
            } else {
                set(&mut out, [other, own, n2, n1]);
            }
            if S::IS_REAL && r.real_part() < 0.0 {
                out.branch = WBranch::Lower;
                out.ks_x = None;
            } else {
                out.branch = WBranch::Principal;
                out.ks_x = Some(sheet_root(r, s.sheet));
            }
        }
        (Ks, EfAdv) | (Ks, EfRet) => {
            let (own, other, n1, n2) = if to == EfAdv { (a, b, m1, m2) } else { (b, a, m2, m1) };
            if own.is_zero() || !positive_or_complex(own) {
                return Err(err("null coordinate needs a positive Kruskal factor"));
            }
            let r = ks_radius(s)?;
            let g = r * r * r * (r - 1.0).exp();
            set(&mut out, [own.ln() * 2.0 + shift + 1.0, one::<S>() / r - 1.0 / 3.0, (own * n1 - other * n2) * 0.5, -(n2 * g) / own]);
            if let Some(x) = s.ks_x {
                out.sheet = Sheet::of(x).unwrap_or(s.sheet);
            }
            out.branch = WBranch::Principal;
        }
        (EfAdv, EfRet) | (EfRet, EfAdv) => {
            let y = b + 1.0 / 3.0;
            if y.is_zero() {
                return Err(err("scri"));
            }
            let r = one::<S>() / y;
            if (r - 1.0).is_zero() || (S::IS_REAL && r.real_part() <= 1.0) {
                return Err(err("advanced and retarded charts overlap only outside the horizon"));
            }
            let fw = -(r * r * r) / (r - 1.0);
            set(&mut out, [(tortoise(r) + shift) * 2.0 - a, b, -m1, m2 + m1 * fw * 2.0]);
        }
        (Xu, Xp) | (Xv, Xq) => {
            let own = ((a - shift - 1.0) * 0.5).exp();
            set(&mut out, [own, b, m1 * 2.0 / own, m2]);
        }
        (Xp, Xu) | (Xq, Xv) => {
            if a.is_zero() || !positive_or_complex(a) {
                return Err(err("null coordinate needs a positive Kruskal factor"));
            }
            set(&mut out, [a.ln() * 2.0 + shift + 1.0, b, a * m1 * 0.5, m2]);
        }
        (Ks, Xp) | (Ks, Xq) => {
            let (own, other, n_own, n_other) = if to == Xp { (a, b, m1, m2) } else { (b, a, m2, m1) };
            if own.is_zero() {
                return Err(err("Kruskal factor vanishes"));
            }
            let x = match s.ks_x {
                Some(x) => x,
                None => {
                    let r = ks_radius(s)?;
                    if s.branch == WBranch::Lower || !positive_or_complex(r) {
                        return Err(err("x is not real for r < 0"));
                    }
                    sheet_root(r, s.sheet)
                }
            };
            let e = (x * x - 1.0).exp();
            set(&mut out, [own, x, n_own - n_other * other / own, x * x * x * e * n_other * 2.0 / own]);
            out.sheet = Sheet::of(x).unwrap_or(s.sheet);
        }
        (Xp, Ks) | (Xq, Ks) => {
            let (own, x) = (a, b);
            if own.is_zero() || x.is_zero() {
                return Err(err("Kruskal factor or x vanishes"));
            }
            let d = x * x - 1.0;
            let e = d.exp();
            let x3 = x * x * x;
            let other = d * e / own;
            let n_other = m2 * own / (x3 * e * 2.0);
            let n_own = m1 + m2 * d / (x3 * own * 2.0);
            if from == Xp {
                set(&mut out, [own, other, n_own, n_other]);
            } else {
                set(&mut out, [other, own, n_other, n_own]);
            }
            out.ks_x = Some(x);
            out.branch = WBranch::Principal;
            out.sheet = Sheet::of(x).unwrap_or(s.sheet);
        }
        (Xp, Yp) | (Xq, Yq) => {
            let x = b;
            if x.is_zero() {
                return Err(err("x = 0"));
            }
            set(&mut out, [a, one::<S>() / (x * x), m1, -(x * x * x * m2) * 0.5]);
            out.sheet = Sheet::of(x).unwrap_or(s.sheet);
        }
        (Yp, Xp) | (Yq, Xq) => {
            let y = b;
            if y.is_zero() || !positive_or_complex(y) {
                return Err(err("x is not real for y ≤ 0"));
            }
            let x = sheet_root(one::<S>() / y, s.sheet);
            set(&mut out, [a, x, m1, -(m2 * 2.0) / (x * x * x)]);
        }
        (EfAdv, Yp) | (EfRet, Yq) => {
            let own = ((a - shift - 1.0) * 0.5).exp();
            set(&mut out, [own, b + 1.0 / 3.0, m1 * 2.0 / own, m2]);
        }
        (Yp, EfAdv) | (Yq, EfRet) => {
            if a.is_zero() || !positive_or_complex(a) {
                return Err(err("null coordinate needs a positive Kruskal factor"));
            }
            set(&mut out, [a.ln() * 2.0 + shift + 1.0, b - 1.0 / 3.0, a * m1 * 0.5, m2]);
        }
        (Xt, Xu) | (Xt, Xv) | (Xu, Xt) | (Xv, Xt) => {
            let x = b;
            let d = x * x - 1.0;
            if d.is_zero() {
                return Err(err("horizon"));
            }
            if (from == Xv || to == Xv) && !retarded_t_overlap(x * x) {
                return Err(err("interior t chart belongs to the advanced side"));
            }
            let f = tortoise(x * x) + shift;
            let k = x * x * x * 2.0 / d;
            let c = match (from, to) {
                (Xt, Xu) => [a + f, x, m1, m2 - k * m1],
                (Xt, _) => [f - a, x, -m1, m2 + k * m1],
                (Xu, _) => [a - f, x, m1, m2 + k * m1],
                _ => [f - a, x, -m1, m2 + k * m1],
            };
            set(&mut out, c);
        }
        _ => return Err(err("charts do not overlap directly")),
    }
    Ok(out)
}
