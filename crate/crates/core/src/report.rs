//! RR-length statistics and the box-plot figure.

use std::fmt::Write as _;

use crate::beats::{
    annotation_class_counts, compute_fences, percentile, remove_outliers, ClassCounts,
    OutlierCounts, OutlierFences,
};
use crate::mitdb::MEDIAN_LENGTH_THRESHOLD;
use crate::qrs::{build_rr_series, r_peaks_from_annotations};
use crate::wfdb::AnnotatedRecord;

/// Five-number summary plus mean, in samples.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let p = |q| percentile(values, q).expect("non-empty, valid percentile");
        Some(Summary {
            count: values.len(),
            mean: values.iter().sum::<f64>() / values.len() as f64,
            min: p(0.0),
            q1: p(25.0),
            median: p(50.0),
            q3: p(75.0),
            max: p(100.0),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordStats {
    pub record: String,
    pub n_samples: usize,
    pub sampling_rate: u32,
    pub beats: usize,
    /// Annotation-derived RR lengths in samples, in stream order.
    pub rr: Vec<f64>,
    pub summary: Option<Summary>,
    pub fences: Option<OutlierFences>,
    pub outliers: OutlierCounts,
    pub classes: ClassCounts,
    pub unmapped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub records: Vec<RecordStats>,
}

pub fn record_stats(record: &AnnotatedRecord) -> RecordStats {
    let peaks = r_peaks_from_annotations(&record.annotations);
    let series = build_rr_series(&peaks, record.sampling_rate());
    let rr = series.lengths();
    let fences = compute_fences(&rr).ok();
    let outliers = fences
        .map(|f| remove_outliers(&series, &f).1)
        .unwrap_or_default();
    let (classes, unmapped) = annotation_class_counts(record);
    RecordStats {
        record: record.name().to_owned(),
        n_samples: record.n_samples(),
        sampling_rate: record.sampling_rate(),
        beats: peaks.len(),
        summary: Summary::of(&rr),
        rr,
        fences,
        outliers,
        classes,
        unmapped,
    }
}

impl StatsReport {
    /// Statistics for each record, sorted by record name.
    pub fn compute(records: &[AnnotatedRecord]) -> StatsReport {
        let mut records: Vec<RecordStats> = records.iter().map(record_stats).collect();
        records.sort_by(|a, b| a.record.cmp(&b.record));
        StatsReport { records }
    }

    pub fn pooled(&self) -> Option<Summary> {
        let all: Vec<f64> = self
            .records
            .iter()
            .flat_map(|r| r.rr.iter().copied())
            .collect();
        Summary::of(&all)
    }

    pub fn class_totals(&self) -> ClassCounts {
        let mut c = ClassCounts::default();
        for r in &self.records {
            c += r.classes;
        }
        c
    }

    pub fn outlier_totals(&self) -> OutlierCounts {
        let mut t = OutlierCounts::default();
        for r in &self.records {
            t += r.outliers;
        }
        t
    }

    /// Records whose median RR length exceeds the threshold, with the median.
    pub fn long_median_records(&self) -> Vec<(&str, f64)> {
        self.records
            .iter()
            .filter_map(|r| r.summary.map(|s| (r.record.as_str(), s.median)))
            .filter(|(_, m)| *m > MEDIAN_LENGTH_THRESHOLD)
            .collect()
    }

    /// `key=value` text: pooled figures first, then one `# record` section
    /// per record.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "records={}", self.records.len());
        if let Some(s) = self.pooled() {
            write_summary(w, "pooled.rr", &s);
        }
        write_outliers(w, "outliers", &self.outlier_totals());
        let classes = self.class_totals();
        write_classes(w, &classes);
        let _ = writeln!(
            w,
            "class.unmapped={}",
            self.records.iter().map(|r| r.unmapped).sum::<usize>()
        );
        let long = self.long_median_records();
        let _ = writeln!(
            w,
            "median_over_{MEDIAN_LENGTH_THRESHOLD}.count={}",
            long.len()
        );
        let names: Vec<&str> = long.iter().map(|l| l.0).collect();
        let _ = writeln!(
            w,
            "median_over_{MEDIAN_LENGTH_THRESHOLD}.records={}",
            names.join(",")
        );

        for r in &self.records {
            let _ = writeln!(w, "\n# record {}", r.record);
            let _ = writeln!(w, "samples={}", r.n_samples);
            let _ = writeln!(w, "sampling_rate={}", r.sampling_rate);
            let _ = writeln!(w, "beats={}", r.beats);
            if let Some(s) = &r.summary {
                write_summary(w, "rr", s);
            }
            if let Some(f) = &r.fences {
                let _ = writeln!(w, "fence.lower={:.3}", f.lower_fence);
                let _ = writeln!(w, "fence.upper={:.3}", f.upper_fence);
            }
            write_outliers(w, "outliers", &r.outliers);
            write_classes(w, &r.classes);
            let _ = writeln!(w, "class.unmapped={}", r.unmapped);
        }
        out
    }
}

fn write_summary(w: &mut String, prefix: &str, s: &Summary) {
    let _ = writeln!(w, "{prefix}.count={}", s.count);
    for (k, v) in [
        ("mean", s.mean),
        ("min", s.min),
        ("q1", s.q1),
        ("median", s.median),
        ("q3", s.q3),
        ("max", s.max),
    ] {
        let _ = writeln!(w, "{prefix}.{k}={v:.3}");
    }
}

fn write_outliers(w: &mut String, prefix: &str, c: &OutlierCounts) {
    let _ = writeln!(w, "{prefix}.upper_removed={}", c.upper_removed);
    let _ = writeln!(w, "{prefix}.lower_removed={}", c.lower_removed);
    let _ = writeln!(w, "{prefix}.retained={}", c.retained);
    let _ = writeln!(w, "{prefix}.beats_dropped={}", c.beats_dropped);
}

fn write_classes(w: &mut String, c: &ClassCounts) {
    let pct = c.percentages();
    for l in crate::beats::BeatLabel::ALL {
        let _ = writeln!(w, "class.{l}={}", c.get(l));
        let _ = writeln!(w, "class.{l}.percent={:.2}", pct[l.code() as usize]);
    }
    let _ = writeln!(w, "class.total={}", c.total());
}

/// SVG 1.1 box plot of RR lengths, one box per record. Boxes span Q1–Q3,
/// whiskers end at the record's fences and intervals beyond them are dots.
pub fn boxplot_svg(report: &StatsReport) -> String {
    const LEFT: f64 = 60.0;
    const TOP: f64 = 30.0;
    const PLOT_H: f64 = 360.0;
    const STEP: f64 = 22.0;
    const BOX_W: f64 = 12.0;

    let drawn: Vec<(&RecordStats, &OutlierFences)> = report
        .records
        .iter()
        .filter_map(|r| r.fences.as_ref().map(|f| (r, f)))
        .collect();
    let lo = drawn
        .iter()
        .map(|(r, f)| f.lower_fence.min(r.summary.map_or(0.0, |s| s.min)))
        .fold(0.0_f64, f64::min);
    let hi = drawn
        .iter()
        .map(|(r, f)| f.upper_fence.max(r.summary.map_or(0.0, |s| s.max)))
        .fold(1.0_f64, f64::max);
    let y = |v: f64| TOP + PLOT_H * (hi - v) / (hi - lo);
    let width = LEFT + STEP * drawn.len().max(1) as f64 + 20.0;
    let height = TOP + PLOT_H + 50.0;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        s,
        "<title>Heartbeat length distribution (RR, samples)</title>"
    );
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="black"/>"#,
        TOP + PLOT_H
    );
    for i in 0..=5 {
        let v = lo + (hi - lo) * f64::from(i) / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{v:.0}</text>"#,
            LEFT - 4.0,
            y(v) + 3.0
        );
    }
    for (i, (r, f)) in drawn.iter().enumerate() {
        let cx = LEFT + STEP * (i as f64 + 0.5);
        let (x0, x1) = (cx - BOX_W / 2.0, cx + BOX_W / 2.0);
        let _ = writeln!(s, r#"<g class="record" id="record-{}">"#, r.record);
        let _ = writeln!(
            s,
            r#"<line class="whisker" x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#,
            y(f.upper_fence),
            y(f.q3)
        );
        let _ = writeln!(
            s,
            r#"<line class="whisker" x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#,
            y(f.q1),
            y(f.lower_fence)
        );
        for fence in [f.upper_fence, f.lower_fence] {
            let _ = writeln!(
                s,
                r#"<line class="fence" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
                cx - BOX_W / 4.0,
                y(fence),
                cx + BOX_W / 4.0,
                y(fence)
            );
        }
        let _ = writeln!(
            s,
            r#"<rect class="box" x="{x0:.2}" y="{:.2}" width="{BOX_W}" height="{:.2}" fill="lightsteelblue" stroke="black"/>"#,
            y(f.q3),
            y(f.q1) - y(f.q3)
        );
        if let Some(sum) = r.summary {
            let _ = writeln!(
                s,
                r#"<line class="median" x1="{x0:.2}" y1="{:.2}" x2="{x1:.2}" y2="{:.2}" stroke="darkred" stroke-width="2"/>"#,
                y(sum.median),
                y(sum.median)
            );
        }
        for &v in
            r.rr.iter()
                .filter(|&&v| v < f.lower_fence || v > f.upper_fence)
        {
            let _ = writeln!(
                s,
                r#"<circle class="outlier" cx="{cx:.2}" cy="{:.2}" r="1.5" fill="none" stroke="gray"/>"#,
                y(v)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{cx:.2}" y="{:.2}" font-size="9" text-anchor="end" transform="rotate(-90 {cx:.2} {:.2})">{}</text>"#,
            TOP + PLOT_H + 6.0,
            TOP + PLOT_H + 6.0,
            r.record
        );
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "</svg>");
    s
}
