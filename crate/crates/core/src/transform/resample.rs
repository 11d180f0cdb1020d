use super::TransformError;
use crate::beats::Beat;

/// Keeps every `factor`-th sample starting at index 0. With `anti_alias` a
/// centred moving average of width `factor` runs first; near the ends it
/// averages only the samples that exist.
pub fn downsample(x: &[f32], factor: usize, anti_alias: bool) -> Result<Vec<f32>, TransformError> {
    if factor == 0 {
        return Err(TransformError::ZeroFactor);
    }
    if anti_alias && factor > 1 {
        Ok(moving_average(x, factor)
            .into_iter()
            .step_by(factor)
            .collect())
    } else {
        Ok(x.iter().copied().step_by(factor).collect())
    }
}

fn moving_average(x: &[f32], width: usize) -> Vec<f32> {
    let back = (width - 1) / 2;
    let ahead = width / 2;
    (0..x.len())
        .map(|i| {
            let lo = i.saturating_sub(back);
            let hi = (i + ahead).min(x.len() - 1);
            let sum: f64 = x[lo..=hi].iter().map(|&v| f64::from(v)).sum();
            (sum / (hi - lo + 1) as f64) as f32
        })
        .collect()
}

/// Downsamples a beat, keeping padding at exactly zero. The optional
/// anti-alias filter only sees the signal span.
pub fn downsample_beat(
    beat: &Beat,
    factor: usize,
    anti_alias: bool,
) -> Result<Beat, TransformError> {
    if factor == 0 {
        return Err(TransformError::ZeroFactor);
    }
    let mut work = beat.samples.clone();
    if anti_alias && factor > 1 && beat.span_len > 0 {
        let smoothed = moving_average(beat.span(), factor);
        work[beat.span_start..beat.span_start + beat.span_len].copy_from_slice(&smoothed);
    }
    let samples = downsample(&work, factor, false)?;
    let start = beat.span_start.div_ceil(factor);
    let end = (beat.span_start + beat.span_len).div_ceil(factor);
    Ok(Beat {
        samples,
        span_start: start,
        span_len: end - start,
        ..beat.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beats::BeatLabel;

    #[test]
    fn stride_three() {
        let x: Vec<f32> = (0..9).map(|v| v as f32).collect();
        assert_eq!(downsample(&x, 3, false).unwrap(), vec![0.0, 3.0, 6.0]);
    }

    #[test]
    fn lengths() {
        assert_eq!(downsample(&[0.0; 450], 3, false).unwrap().len(), 150);
        assert_eq!(downsample(&[0.0; 10], 3, false).unwrap().len(), 4);
        assert_eq!(downsample(&[0.0; 10], 3, true).unwrap().len(), 4);
    }

    #[test]
    fn factor_one_is_identity() {
        let x = vec![1.5, -2.0, 7.25];
        assert_eq!(downsample(&x, 1, false).unwrap(), x);
        assert_eq!(downsample(&x, 1, true).unwrap(), x);
    }

    #[test]
    fn zero_factor() {
        assert!(matches!(
            downsample(&[1.0], 0, false),
            Err(TransformError::ZeroFactor)
        ));
    }

    #[test]
    fn anti_alias_averages() {
        let x = [3.0, 6.0, 9.0, 12.0, 15.0, 18.0];
        // centred width-3 means, clipped at the ends: 4.5, 6, 9, 12, 15, 16.5
        assert_eq!(downsample(&x, 3, true).unwrap(), vec![4.5, 12.0]);
    }

    fn beat(samples: Vec<f32>, span_start: usize, span_len: usize) -> Beat {
        Beat {
            samples,
            label: BeatLabel::N,
            record: "r".into(),
            r_index: 0,
            raw_length: span_len,
            window_id: 0,
            span_start,
            span_len,
        }
    }

    #[test]
    fn beat_span_follows_grid() {
        let mut s = vec![0.0f32; 12];
        for (i, v) in s.iter_mut().enumerate().skip(2).take(7) {
            *v = i as f32;
        }
        let b = beat(s, 2, 7); // span 2..9
        let d = downsample_beat(&b, 3, false).unwrap();
        assert_eq!(d.samples, vec![0.0, 3.0, 6.0, 0.0]);
        assert_eq!((d.span_start, d.span_len), (1, 2));
        assert!(d.padding_is_zero());

        let a = downsample_beat(&b, 3, true).unwrap();
        assert!(a.padding_is_zero());
        assert_eq!(a.samples[1], 3.0);
    }
}
