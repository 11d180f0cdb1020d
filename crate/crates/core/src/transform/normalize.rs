use super::TransformError;
use crate::beats::Beat;

/// Population mean and standard deviation, accumulated in f64.
pub fn mean_std(values: &[f32]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().map(|&v| f64::from(v)).sum::<f64>() / n;
    let var = values
        .iter()
        .map(|&v| (f64::from(v) - mean).powi(2))
        .sum::<f64>()
        / n;
    (mean, var.sqrt())
}

/// Z-scores the signal span of a beat with the population deviation. The
/// padding is left untouched.
pub fn zscore(beat: &Beat) -> Result<Beat, TransformError> {
    let span = beat.span();
    let (mean, std) = mean_std(span);
    if span.len() < 2 || std <= 1e-12 * mean.abs().max(1.0) {
        return Err(TransformError::ZeroVariance {
            record: beat.record.clone(),
            r_index: beat.r_index,
        });
    }
    let mut out = beat.clone();
    for v in out.span_mut() {
        *v = ((f64::from(*v) - mean) / std) as f32;
    }
    Ok(out)
}
