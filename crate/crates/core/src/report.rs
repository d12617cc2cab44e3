//! Assembly of the full analysis into one serializable report.
//!
//! Every field is produced by one of the analysis modules; this layer only
//! gathers and formats. Exact rationals serialize as strings ("27/16")
//! with floating mirrors alongside for plotting consumers. The report body
//! is deterministic for a given input and option set: tool metadata is
//! segregated and carries no timestamps.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{classify_entry, classify_exit, lift, EndpointBehavior, ModulusTrend, Winding};
use crate::features::{
    asymptote_abscissa, real_axis_crossings, tangent_vectors, AxisCrossing, FeatureError,
};
use crate::scalar::{format_scalar, to_f64};
use crate::taylor::{default_order, deviation_series, method_by_name, CoefficientMethod, DeviationSeries};
use crate::xfer::{EndpointSummary, ModulusKind, TransferFunction, TransferFunctionDoc};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalyzeError {
    #[error("unknown coefficient method `{0}`")]
    UnknownMethod(String),
    #[error("coefficient method `{0}` covers odd indices only; analysis needs a complete method")]
    IncompleteMethod(String),
}

/// Options for [`analyze`].
#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    /// Table truncation override; the internal searches always scan far
    /// enough to stay complete regardless.
    pub order: Option<usize>,
    /// Registry name of the coefficient engine filling the report tables.
    pub method: String,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            order: None,
            method: "full-recursion".to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: "nyqual".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EndpointDoc {
    pub modulus_kind: String,
    /// Exact endpoint magnitude, present only for finite endpoints.
    pub modulus: Option<String>,
    pub modulus_f64: Option<f64>,
    pub phase_over_pi: String,
    pub phase_radians: f64,
    pub g_value: String,
}

impl From<&EndpointSummary> for EndpointDoc {
    fn from(s: &EndpointSummary) -> Self {
        let (kind, modulus) = match &s.modulus_kind {
            ModulusKind::Zero => ("zero", None),
            ModulusKind::Finite(v) => ("finite", Some(v.clone())),
            ModulusKind::Infinite => ("infinite", None),
        };
        Self {
            modulus_kind: kind.to_string(),
            modulus_f64: modulus.as_ref().map(to_f64),
            modulus: modulus.as_ref().map(format_scalar),
            phase_over_pi: format_scalar(&s.phase_over_pi),
            phase_radians: to_f64(&s.phase_over_pi) * PI,
            g_value: format_scalar(&s.g_value),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesDoc {
    /// Entries 1..=order as exact rational strings.
    pub values: Vec<String>,
    pub values_f64: Vec<f64>,
    pub first_nonzero_odd: Option<usize>,
    pub first_nonzero_even: Option<usize>,
    pub degenerate_imag: bool,
    pub degenerate_modulus: bool,
}

impl From<&DeviationSeries> for SeriesDoc {
    fn from(d: &DeviationSeries) -> Self {
        Self {
            values: d.values().iter().map(format_scalar).collect(),
            values_f64: d.values().iter().map(to_f64).collect(),
            first_nonzero_odd: d.first_nonzero_odd(),
            first_nonzero_even: d.first_nonzero_even(),
            degenerate_imag: d.degenerate_imag(),
            degenerate_modulus: d.degenerate_modulus(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeviationDoc {
    pub method: String,
    pub order: usize,
    /// Low-frequency parameters of the origin-free part.
    pub low: SeriesDoc,
    /// High-frequency (dual) parameters.
    pub high: SeriesDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftedDoc {
    pub phase_over_pi: String,
    pub phase_radians: f64,
    /// Absent when origin poles dominate the endpoint modulus.
    pub modulus_trend: Option<ModulusTrend>,
    pub dominated_by_origin_poles: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BehaviorDoc {
    pub exit: EndpointBehavior,
    pub entry: EndpointBehavior,
    pub exit_lifted: LiftedDoc,
    pub entry_lifted: LiftedDoc,
    pub exit_winding: Option<Winding>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossingsDoc {
    /// The response is real everywhere; the crossing list is not discrete.
    pub degenerate_on_axis: bool,
    pub list: Vec<AxisCrossing>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AsymptoteDoc {
    pub kind: String,
    pub abscissa: String,
    pub abscissa_f64: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TangentsDoc {
    /// Unit direction as [re, im].
    pub start: [f64; 2],
    pub end: [f64; 2],
}

/// The complete qualitative analysis of one transfer function.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QualitativeReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub input: TransferFunctionDoc,
    pub input_display: String,
    pub relative_degree: i32,
    pub start: EndpointDoc,
    pub end: EndpointDoc,
    pub deviation: DeviationDoc,
    pub behavior: BehaviorDoc,
    pub crossings: CrossingsDoc,
    pub asymptote: Option<AsymptoteDoc>,
    pub tangents: TangentsDoc,
}

impl QualitativeReport {
    /// True when any structural degeneracy was detected; drives the
    /// strict-mode exit status of the command line.
    pub fn is_degenerate(&self) -> bool {
        self.crossings.degenerate_on_axis
            || self.deviation.low.degenerate_imag
            || self.deviation.low.degenerate_modulus
            || self.deviation.high.degenerate_imag
            || self.deviation.high.degenerate_modulus
    }
}

fn lifted_doc(behavior: &EndpointBehavior, tf: &TransferFunction) -> LiftedDoc {
    let lifted = lift(behavior, tf);
    LiftedDoc {
        phase_over_pi: format_scalar(&lifted.phase_over_pi),
        phase_radians: to_f64(&lifted.phase_over_pi) * PI,
        dominated_by_origin_poles: lifted.modulus_trend.is_none(),
        modulus_trend: lifted.modulus_trend,
    }
}

/// Runs the full analysis and assembles the report.
///
/// ```
/// use nyqual_core::{analyze, AnalyzeOptions, TransferFunction};
///
/// let tf = TransferFunction::parse("(2s^3+6s^2+2s+1)/(4s^3+5s^2+2s+1)").unwrap();
/// let report = analyze(&tf, &AnalyzeOptions::default()).unwrap();
/// assert_eq!(&report.deviation.low.values[..3], &["0", "-1", "4"]);
/// assert_eq!(report.behavior.exit.archetype.map(|a| a.index()), Some(1));
/// ```
pub fn analyze(tf: &TransferFunction, options: &AnalyzeOptions) -> Result<QualitativeReport, AnalyzeError> {
    let method = method_by_name(&options.method)
        .ok_or_else(|| AnalyzeError::UnknownMethod(options.method.clone()))?;
    if !method.complete() {
        return Err(AnalyzeError::IncompleteMethod(options.method.clone()));
    }
    let dual = tf.dual();
    let order = options.order.unwrap_or_else(|| default_order(tf).max(default_order(&dual)));

    // The deviation series is defined through the production recursion;
    // the chosen engine must reproduce the same coefficients exactly (the
    // verification layer re-checks this identity over random inputs).
    let low = deviation_series(tf, order);
    let high = deviation_series(&dual, order);
    debug_assert!(method
        .table(tf, order)
        .agrees_with(&crate::taylor::FullRecursion.table(tf, order)));

    let (start_summary, end_summary) = tf.endpoints();
    let exit = classify_exit(tf);
    let entry = classify_entry(tf);
    let exit_lifted = lifted_doc(&exit, tf);
    let entry_lifted = lifted_doc(&entry, tf);
    let crossings = match real_axis_crossings(tf) {
        Ok(list) => CrossingsDoc {
            degenerate_on_axis: false,
            list,
        },
        Err(FeatureError::DegenerateOnAxis) => CrossingsDoc {
            degenerate_on_axis: true,
            list: Vec::new(),
        },
        Err(other) => unreachable!("crossing computation takes no range: {other}"),
    };
    let asymptote = asymptote_abscissa(tf).map(|a| AsymptoteDoc {
        kind: "vertical-line".to_string(),
        abscissa: format_scalar(&a.abscissa),
        abscissa_f64: to_f64(&a.abscissa),
    });
    let (tangent_start, tangent_end) = tangent_vectors(tf);

    Ok(QualitativeReport {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::default(),
        input: TransferFunctionDoc::from(tf),
        input_display: tf.to_string(),
        relative_degree: tf.relative_degree(),
        start: EndpointDoc::from(&start_summary),
        end: EndpointDoc::from(&end_summary),
        deviation: DeviationDoc {
            method: method.name().to_string(),
            order,
            low: SeriesDoc::from(&low),
            high: SeriesDoc::from(&high),
        },
        behavior: BehaviorDoc {
            exit_winding: exit.exit_winding(),
            exit,
            entry,
            exit_lifted,
            entry_lifted,
        },
        crossings,
        asymptote,
        tangents: TangentsDoc {
            start: [tangent_start.direction.re, tangent_start.direction.im],
            end: [tangent_end.direction.re, tangent_end.direction.im],
        },
    })
}
