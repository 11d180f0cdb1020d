use super::BuildError;

/// `size` samples around `r_index`: from `r_index - size/2` (floor) up to
/// `r_index + ceil(size/2)`, exclusive. Positions outside the channel read
/// as zero. The R sample lands at offset `size / 2`.
pub fn extract_beat<T: Copy + Into<f32>>(channel: &[T], r_index: usize, size: usize) -> Vec<f32> {
    let start = r_index as isize - (size / 2) as isize;
    (0..size as isize)
        .map(|k| {
            let at = start + k;
            if at >= 0 && (at as usize) < channel.len() {
                channel[at as usize].into()
            } else {
                0.0
            }
        })
        .collect()
}

/// Centres `raw` in `global_size` samples of zeros. An odd deficit puts the
/// extra zero on the right.
pub fn pad_center(raw: &[f32], global_size: usize) -> Result<Vec<f32>, BuildError> {
    if raw.len() > global_size {
        return Err(BuildError::BeatLongerThanGlobal {
            size: raw.len(),
            global_size,
        });
    }
    let left = (global_size - raw.len()) / 2;
    let mut out = vec![0.0; global_size];
    out[left..left + raw.len()].copy_from_slice(raw);
    Ok(out)
}

/// Places `raw` so that its sample at `r_offset` lands on `global_size / 2`.
///
/// For a segment from [`extract_beat`] (`r_offset = raw.len() / 2`) this is
/// [`pad_center`] except when the segment is odd and `global_size` even;
/// then the extra zero goes left so the R peak stays on the centre index.
/// Returns the padded beat and the offset of the raw span within it.
pub fn center_on_r(
    raw: &[f32],
    r_offset: usize,
    global_size: usize,
) -> Result<(Vec<f32>, usize), BuildError> {
    let too_long = BuildError::BeatLongerThanGlobal {
        size: raw.len(),
        global_size,
    };
    let centre = global_size / 2;
    if raw.len() > global_size || r_offset > centre || r_offset >= raw.len().max(1) {
        return Err(too_long);
    }
    let left = centre - r_offset;
    if left + raw.len() > global_size {
        return Err(too_long);
    }
    let mut out = vec![0.0; global_size];
    out[left..left + raw.len()].copy_from_slice(raw);
    Ok((out, left))
}
