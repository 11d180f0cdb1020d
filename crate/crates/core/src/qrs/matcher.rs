use super::ms_to_samples;

/// Detection scores against a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchStats {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    /// TP / (TP + FN); 0 when the reference is empty.
    pub sensitivity: f64,
    /// TP / (TP + FP); 0 when nothing was detected.
    pub ppv: f64,
    pub sensitivity_defined: bool,
    pub ppv_defined: bool,
}

/// One-to-one pairs `(detected_pos, reference_pos)` (positions in the input
/// slices) within `tol` samples, chosen greedily by increasing distance.
pub fn matched_pairs(detected: &[usize], reference: &[usize], tol: usize) -> Vec<(usize, usize)> {
    let mut candidates: Vec<(usize, usize, usize)> = Vec::new();
    let mut start = 0;
    for (di, &d) in detected.iter().enumerate() {
        while start < reference.len() && reference[start] + tol < d {
            start += 1;
        }
        for (ri, &r) in reference.iter().enumerate().skip(start) {
            if r > d + tol {
                break;
            }
            candidates.push((d.abs_diff(r), di, ri));
        }
    }
    candidates.sort_by_key(|&(dist, di, ri)| {
        let (d, r) = (detected[di], reference[ri]);
        (dist, d.min(r), d.max(r), di, ri)
    });

    let mut det_used = vec![false; detected.len()];
    let mut ref_used = vec![false; reference.len()];
    let mut pairs = Vec::new();
    for (_, di, ri) in candidates {
        if !det_used[di] && !ref_used[ri] {
            det_used[di] = true;
            ref_used[ri] = true;
            pairs.push((di, ri));
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Scores `detected` against `reference` with a tolerance in milliseconds.
pub fn match_detections(
    detected: &[usize],
    reference: &[usize],
    tol_ms: f64,
    fs: f64,
) -> MatchStats {
    let tol = ms_to_samples(tol_ms, fs);
    let tp = matched_pairs(detected, reference, tol).len();
    let fp = detected.len() - tp;
    let fn_ = reference.len() - tp;
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            (0.0, false)
        } else {
            (num as f64 / den as f64, true)
        }
    };
    let (sensitivity, sensitivity_defined) = ratio(tp, tp + fn_);
    let (ppv, ppv_defined) = ratio(tp, tp + fp);
    MatchStats {
        true_pos: tp,
        false_pos: fp,
        false_neg: fn_,
        sensitivity,
        ppv,
        sensitivity_defined,
        ppv_defined,
    }
}
