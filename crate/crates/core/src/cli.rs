//! End-to-end solves and table reproduction behind the command-line tool.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PsletError, Result};
use crate::leading::{solve_q0, LeadingOrderSolution};
use crate::oracle::{solve_radial, OracleConfig};
use crate::pade::{fit, resummed_energy};
use crate::potential::PotentialSpec;
use crate::riccati::{build_v_terms, energy_expansion, solve_hierarchy, EnergyExpansion};
use crate::scalar::{format_significant, DoubleDouble, Real};
use crate::tables::{benchmarks, last_digit_unit, significant_unit, Benchmark, Family, TableId};

/// Highest `E(n)` kept by default (`E(0) .. E(8)`).
pub const DEFAULT_SERIES_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveRequest {
    pub potential: PotentialSpec,
    pub l: f64,
    pub n_r: u32,
    /// Highest `E(n)` kept in the series.
    pub order: usize,
    pub pade: bool,
    pub oracle_check: bool,
    pub precision: Precision,
    pub q0_bracket: Option<(f64, f64)>,
}

impl SolveRequest {
    pub fn new(potential: PotentialSpec, l: f64) -> Self {
        Self {
            potential,
            l,
            n_r: 0,
            order: DEFAULT_SERIES_ORDER,
            pade: true,
            oracle_check: false,
            precision: Precision::Double,
            q0_bracket: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_r != 0 {
            return Err(PsletError::InvalidArgument(format!(
                "n_r = {} requested; only nodeless states are supported",
                self.n_r
            )));
        }
        if !self.l.is_finite() || self.l < -0.5 {
            return Err(PsletError::InvalidArgument(format!("l = {} must satisfy l >= -1/2", self.l)));
        }
        if self.pade && self.order < 1 {
            return Err(PsletError::InvalidArgument("Padé resummation needs order >= 1".into()));
        }
        Ok(())
    }

    /// Denominator and numerator degrees `(n, m)`; `(4, 4)` for order 8.
    pub fn pade_degrees(&self) -> (usize, usize) {
        let n = self.order / 2;
        (n, self.order - n)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub precision: Precision,
    /// Half-power order of the Riccati hierarchy that was solved.
    pub hierarchy_order: usize,
    /// Largest relative Riccati residual over all orders.
    pub riccati_residual: f64,
    /// `[N, M+1]` of the approximant, when one was requested.
    pub pade_order: Option<[usize; 2]>,
    pub pade_condition: Option<f64>,
    pub flags: Vec<String>,
    /// Extended-precision totals with 32 significant digits.
    pub e_total_extended: Option<String>,
    pub e_pade_extended: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub leading: LeadingOrderSolution,
    pub series: EnergyExpansion,
    pub e_total: f64,
    pub e_pade: Option<f64>,
    pub e_oracle: Option<f64>,
    pub diagnostics: Diagnostics,
}

pub const FLAG_SINGULAR_PADE: &str = "SINGULAR_PADE";
pub const FLAG_PADE_POLE: &str = "PADE_POLE";

pub fn run_solve(req: &SolveRequest) -> Result<SolveResult> {
    req.validate()?;
    let mut result = match req.precision {
        Precision::Double => pipeline::<f64>(req)?,
        Precision::Extended => pipeline::<DoubleDouble>(req)?,
    };
    if req.oracle_check {
        let cfg = OracleConfig::auto(&req.potential, req.l, 0)?;
        result.e_oracle = Some(solve_radial::<DoubleDouble>(&req.potential, req.l, &cfg)?.to_f64());
    }
    Ok(result)
}

fn expansion_to_f64<T: Real>(e: &EnergyExpansion<T>) -> EnergyExpansion {
    EnergyExpansion {
        e_minus2: e.e_minus2.to_f64(),
        e_minus1_bracket: e.e_minus1_bracket.to_f64(),
        e: e.e.iter().map(|x| x.to_f64()).collect(),
        lbar: e.lbar.to_f64(),
        beta: e.beta.to_f64(),
        q0: e.q0.to_f64(),
        total: e.total.to_f64(),
    }
}

fn pipeline<T: Real>(req: &SolveRequest) -> Result<SolveResult> {
    let lead = solve_q0::<T>(&req.potential, req.l, req.n_r, req.q0_bracket)?;
    let k = 2 * (req.order + 1);
    let terms = build_v_terms(&req.potential, &lead, k);
    let hierarchy = solve_hierarchy(&terms, &lead, k)?;
    let series = energy_expansion(&hierarchy, &lead, req.order)?;
    let extended = req.precision == Precision::Extended;

    let mut flags = Vec::new();
    let (mut pade_order, mut pade_condition, mut e_pade) = (None, None, None);
    if req.pade {
        let (n, m) = req.pade_degrees();
        pade_order = Some([n, m + 1]);
        match fit(&series.e, n, m) {
            Ok(pa) => {
                pade_condition = Some(pa.condition);
                if pa.has_pole_in(T::one() / series.lbar) {
                    flags.push(FLAG_PADE_POLE.to_string());
                }
                match resummed_energy(&series, &pa) {
                    Ok(e) => e_pade = Some(e),
                    Err(PsletError::PoleAtEvaluation { .. }) => {
                        if !flags.iter().any(|f| f == FLAG_PADE_POLE) {
                            flags.push(FLAG_PADE_POLE.to_string());
                        }
                    }
                    Err(err) => return Err(err),
                }
            }
            Err(PsletError::SingularSystem { condition }) => {
                pade_condition = Some(condition);
                flags.push(FLAG_SINGULAR_PADE.to_string());
                e_pade = Some(series.total);
            }
            Err(err) => return Err(err),
        }
    }

    Ok(SolveResult {
        leading: lead.to_f64(),
        series: expansion_to_f64(&series),
        e_total: series.total.to_f64(),
        e_pade: e_pade.map(|e| e.to_f64()),
        e_oracle: None,
        diagnostics: Diagnostics {
            precision: req.precision,
            hierarchy_order: k,
            riccati_residual: hierarchy.max_residual(&terms, &lead).to_f64(),
            pade_order,
            pade_condition,
            flags,
            e_total_extended: extended.then(|| series.total.to_decimal(32)),
            e_pade_extended: e_pade.filter(|_| extended).map(|e| e.to_decimal(32)),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub table: TableId,
    pub param_name: String,
    pub param: f64,
    pub l: f64,
    pub e_pslet: Option<f64>,
    pub e_pade: Option<f64>,
    pub e_oracle: Option<f64>,
    pub ref_pslet: String,
    pub ref_pade: String,
    pub ref_exact: Option<String>,
    pub ref_other: Option<String>,
    pub dev_pslet: Option<f64>,
    pub dev_pade: Option<f64>,
    /// `E_oracle - E_exact`, or `E[4,5] - E_oracle` on disputed rows.
    pub dev_oracle: Option<f64>,
    pub disputed: bool,
    pub pass: bool,
    pub flags: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TableOptions {
    pub precision: Precision,
    pub oracle: bool,
    pub parallel: bool,
}

impl TableOptions {
    pub fn full(precision: Precision) -> Self {
        Self { precision, oracle: true, parallel: true }
    }
}

/// Tolerance for comparing a computed value with a printed one.
///
/// Quoted digits beyond what double precision reaches are compared to 12
/// significant digits unless extended precision is in use.
pub fn printed_tolerance(printed: &str, precision: Precision) -> f64 {
    let unit = last_digit_unit(printed);
    let value: f64 = printed.parse().unwrap_or(0.0);
    match precision {
        Precision::Double if value != 0.0 => unit.max(significant_unit(value, 12)),
        _ => unit,
    }
}

fn matches_printed(x: f64, printed: &str, precision: Precision) -> bool {
    let reference: f64 = printed.parse().unwrap_or(f64::NAN);
    (x - reference).abs() <= printed_tolerance(printed, precision) * (1.0 + 1e-9)
}

fn run_row(id: TableId, family: Family, b: &Benchmark, opts: TableOptions) -> TableRow {
    let scale = family.energy_scale();
    let mut flags = Vec::new();
    let mut e_pslet = None;
    let mut e_pade = None;
    let mut e_oracle = None;

    match family.potential(b.param) {
        Ok(pot) => {
            let mut req = SolveRequest::new(pot.clone(), b.l);
            req.precision = opts.precision;
            match run_solve(&req) {
                Ok(res) => {
                    e_pslet = Some(scale * res.e_total);
                    e_pade = res.e_pade.map(|e| scale * e);
                    flags.extend(res.diagnostics.flags);
                }
                Err(err) => flags.push(err.code().to_string()),
            }
            if opts.oracle {
                let solved = OracleConfig::auto(&pot, b.l, 0)
                    .and_then(|cfg| solve_radial::<DoubleDouble>(&pot, b.l, &cfg));
                match solved {
                    Ok(e) => e_oracle = Some(scale * e.to_f64()),
                    Err(err) => flags.push(format!("ORACLE_{}", err.code())),
                }
            }
        }
        Err(err) => flags.push(err.code().to_string()),
    }

    let dev = |x: Option<f64>, printed: &str| x.map(|x| x - printed.parse::<f64>().unwrap_or(f64::NAN));
    let dev_pslet = dev(e_pslet, b.pslet);
    let dev_pade = dev(e_pade, b.pade);
    let dev_oracle = if b.disputed {
        e_pade.zip(e_oracle).map(|(p, o)| p - o)
    } else {
        b.exact.and_then(|ex| dev(e_oracle, ex))
    };

    let pass = if b.disputed {
        matches!((e_pade, e_oracle), (Some(p), Some(o)) if (p - o).abs() <= significant_unit(o, 6))
    } else {
        let pslet_ok = e_pslet.is_some_and(|x| matches_printed(x, b.pslet, opts.precision));
        let pade_ok = e_pade.is_some_and(|x| matches_printed(x, b.pade, opts.precision));
        let exact_ok = match (b.exact, opts.oracle) {
            (Some(ex), true) => e_oracle.is_some_and(|x| matches_printed(x, ex, Precision::Extended)),
            _ => true,
        };
        pslet_ok && pade_ok && exact_ok
    };

    TableRow {
        table: id,
        param_name: family.param_name().to_string(),
        param: b.param,
        l: b.l,
        e_pslet,
        e_pade,
        e_oracle,
        ref_pslet: b.pslet.to_string(),
        ref_pade: b.pade.to_string(),
        ref_exact: b.exact.map(str::to_string),
        ref_other: b.other.map(str::to_string),
        dev_pslet,
        dev_pade,
        dev_oracle,
        disputed: b.disputed,
        pass,
        flags,
    }
}

/// Recomputes every row of a benchmark table; rows keep their printed order.
pub fn reproduce_table(id: TableId, opts: TableOptions) -> Vec<TableRow> {
    let (family, rows) = benchmarks(id);
    if opts.parallel {
        rows.par_iter().map(|b| run_row(id, family, b, opts)).collect()
    } else {
        rows.iter().map(|b| run_row(id, family, b, opts)).collect()
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_ROW_FAILED: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

pub fn table_exit_code(rows: &[TableRow]) -> i32 {
    if rows.iter().any(|r| !r.disputed && !r.pass) {
        EXIT_ROW_FAILED
    } else {
        EXIT_OK
    }
}

pub fn error_exit_code(err: &PsletError) -> i32 {
    if err.is_configuration_error() {
        EXIT_CONFIG
    } else {
        EXIT_COMPUTATION
    }
}

pub const CSV_HEADER: &str = "table,param_name,param,l,e_pslet,e_pade,e_oracle,ref_pslet,ref_pade,ref_exact,ref_other,\
dev_pslet,dev_pade,dev_oracle,disputed,pass,flags";

fn csv_number(x: Option<f64>) -> String {
    x.map(|x| format_significant(x, 17)).unwrap_or_default()
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            r.table.name().to_string(),
            r.param_name.clone(),
            r.param.to_string(),
            r.l.to_string(),
            csv_number(r.e_pslet),
            csv_number(r.e_pade),
            csv_number(r.e_oracle),
            r.ref_pslet.clone(),
            r.ref_pade.clone(),
            r.ref_exact.clone().unwrap_or_default(),
            r.ref_other.clone().unwrap_or_default(),
            csv_number(r.dev_pslet),
            csv_number(r.dev_pade),
            csv_number(r.dev_oracle),
            r.disputed.to_string(),
            r.pass.to_string(),
            r.flags.join(";"),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub const SOLVE_CSV_HEADER: &str = "l,q0,w,beta,lbar,e_total,e_pade,e_oracle,riccati_residual,flags";

pub fn solve_csv(res: &SolveResult) -> String {
    let lead = &res.leading;
    let fields = [
        lead.l.to_string(),
        format_significant(lead.q0, 17),
        format_significant(lead.w, 17),
        format_significant(lead.beta, 17),
        format_significant(lead.lbar, 17),
        format_significant(res.e_total, 17),
        csv_number(res.e_pade),
        csv_number(res.e_oracle),
        format_significant(res.diagnostics.riccati_residual, 3),
        res.diagnostics.flags.join(";"),
    ];
    format!("{SOLVE_CSV_HEADER}\n{}\n", fields.join(","))
}
