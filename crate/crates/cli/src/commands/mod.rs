mod atlas;
mod classify;
mod precession;
mod residues;
mod trace;

pub use atlas::{cmd_atlas_check, AtlasData};
pub use classify::{cmd_classify, ClassifyData};
pub use precession::{cmd_precession, PassRow, PrecessionData, RationalFlag};
pub use residues::{cmd_residues, ResiduesData};
pub use trace::{cmd_trace, trace_csv, DriftSummary, TraceData, TraceSample};

use string_geodesics::atlas::{hamiltonian, ChartId, CotangentState, Sheet};
use string_geodesics::flow::{conserved_u, init_null, ConservedSet, FlowError, SphereGeodesic};

use crate::args::GeodesicArgs;
use crate::error::CliError;

/// What a command hands back to `main`.
pub struct Outcome {
    pub document: String,
    /// Human-readable lines for the terminal.
    pub summary: Vec<String>,
    /// Exit code when the run itself succeeded but a check did not.
    pub failed: Option<u8>,
}

/// Start state and invariants from `--start`, `--H`, `--U`, `--H2`, with
/// `u` overriding `--U`.
pub(crate) fn start_state(
    g: &GeodesicArgs,
    u_override: Option<f64>,
) -> Result<(ConservedSet, SphereGeodesic, CotangentState<f64>), CliError> {
    let u_flag = u_override.or(g.u);
    if let Some(h2) = g.h2 {
        if !(h2 >= 0.0) {
            return Err(CliError::config("--H2", format!("must be non-negative, got {h2}")));
        }
    }
    let st = &g.start;
    if st.len() == 4 {
        let state = CotangentState::new(g.chart, [st[0], st[1]], [st[2], st[3]]);
        let state = with_sheet(state);
        state.validate().map_err(|e| CliError::config("--start", e.to_string()))?;
        let h = hamiltonian(&state).map_err(|e| CliError::config("--start", e.to_string()))?;
        let u = conserved_u(&state);
        if let Some(hf) = g.h {
            if (hf - h).abs() > 1e-8 * (1.0 + h.abs()) {
                return Err(CliError::config("--H", format!("start state has H = {h}, flag says {hf}")));
            }
        }
        if let Some(uf) = u_flag {
            if (uf - u).abs() > 1e-8 * (1.0 + u.abs()) {
                return Err(CliError::config("--U", format!("start state has U = {u}, flag says {uf}")));
            }
        }
        let h2 = g.h2.unwrap_or(h.max(0.0));
        return Ok((ConservedSet { h, u, h2 }, SphereGeodesic::equatorial(h2), state));
    }
    let h2 = match (g.h, g.h2) {
        (Some(h), Some(h2)) if (h - h2).abs() > 1e-12 * (1.0 + h.abs()) => {
            return Err(CliError::config("--H", "two-component starts complete a null geodesic, so --H must equal --H2"))
        }
        (_, Some(h2)) => h2,
        (Some(h), None) if h >= 0.0 => h,
        (Some(h), None) => return Err(CliError::config("--H", format!("must be non-negative, got {h}"))),
        (None, None) => return Err(CliError::config("--H2", "one of --H or --H2 is required")),
    };
    let u = u_flag.ok_or_else(|| CliError::config("--U", "required with a two-component --start"))?;
    let m1 = match g.chart {
        ChartId::EfAdv | ChartId::Xu | ChartId::Schw | ChartId::Xt => u,
        ChartId::EfRet | ChartId::Xv => -u,
        c => return Err(CliError::config("--start", format!("chart {c} needs all four components"))),
    };
    let state = with_sheet(CotangentState::new(g.chart, [st[0], st[1]], [m1, 0.0]));
    init_null(h2, &state, g.direction).map_err(|e| match e {
        FlowError::Infeasible { .. } | FlowError::Atlas(_) | FlowError::Argument(_) => {
            CliError::config("--start", e.to_string())
        }
        e => CliError::run(e),
    })
}

fn with_sheet(s: CotangentState<f64>) -> CotangentState<f64> {
    if s.chart.carries_x() && s.position[1] < 0.0 {
        s.with_sheet(Sheet::Negative)
    } else {
        s
    }
}

/// `None` for values JSON cannot carry.
pub(crate) fn finite(v: Option<f64>) -> Option<f64> {
    v.filter(|v| v.is_finite())
}
