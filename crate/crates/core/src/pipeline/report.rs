use std::fmt::Write as _;

use super::experiment::{ExperimentReport, StageTiming};
use crate::classify::{ClassMetrics, ClassReport};

fn pair(report: &ClassReport, pick: impl Fn(&ClassMetrics) -> f64) -> String {
    let cell = |m: Option<&ClassMetrics>| m.map_or_else(|| "NA".to_string(), |m| format!("{:.2}", pick(m)));
    format!("({}, {})", cell(report.class0.as_ref()), cell(report.class1.as_ref()))
}

/// Plain-text table: per-class metrics as `(class 0, class 1)` pairs.
pub fn render_text(report: &ExperimentReport, timings: &[StageTiming]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{} ({}), seed {}, {} features, solver {} after {} iterations",
        report.experiment,
        report.model.name(),
        report.master_seed,
        report.feature_count,
        if report.converged { "converged" } else { "stopped" },
        report.iterations
    )
    .unwrap();
    let width = report.rows.iter().map(|r| r.dataset.len()).max().unwrap_or(0).max(7) + 2;
    writeln!(out, "{:<width$}{:<15}{:<15}{:<15}Accuracy", "Dataset", "Precision", "Recall", "F1-score")
        .unwrap();
    for row in &report.rows {
        let r = &row.report;
        writeln!(
            out,
            "{:<width$}{:<15}{:<15}{:<15}{:.2}",
            row.dataset,
            pair(r, |m| m.precision),
            pair(r, |m| m.recall),
            pair(r, |m| m.f1),
            r.accuracy
        )
        .unwrap();
    }
    if !timings.is_empty() {
        out.push('\n');
        for t in timings {
            writeln!(out, "{:<10}{:>9.3} s", t.stage, t.seconds).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{evaluate, LrModel};
    use crate::config::{preset, Preset, Scale};
    use crate::data::Label;
    use crate::pipeline::experiment::ReportRow;

    #[test]
    fn absent_class_prints_na() {
        let config = preset(Preset::Table3, Scale::Desk, 1);
        let model = LrModel {
            weights: vec![0.0; 3],
            bias: 0.0,
            hyper: config.lr,
            converged: true,
            iterations: 4,
            final_loss: 0.0,
            fingerprint: None,
        };
        let truth = vec![Label::Causal; 4];
        let pred = vec![Label::Causal, Label::Causal, Label::Causal, Label::NonCausal];
        let rows = vec![ReportRow { dataset: "ARMA testing set".into(), report: evaluate(&pred, &truth).unwrap() }];
        let text = render_text(&ExperimentReport::new(&config, &model, rows), &[]);
        assert!(text.contains("(NA, 1.00)"), "{text}");
        assert!(text.contains("(NA, 0.75)"), "{text}");
        assert!(text.contains("0.75\n"), "{text}");
    }
}
