//! Format 212: pairs of 12-bit two's-complement samples packed in 3 bytes.
//!
//! For a byte triple `b0 b1 b2` the first sample is `b0 | (b1 & 0x0F) << 8`
//! and the second is `b2 | (b1 >> 4) << 8`. Samples of all signals are
//! interleaved frame by frame. An odd total sample count ends with a 2-byte
//! group holding only the first sample.

use super::WfdbError;

/// Bytes needed to hold `total_samples` samples.
pub fn format212_len(total_samples: usize) -> usize {
    total_samples / 2 * 3 + (total_samples % 2) * 2
}

#[inline]
fn sign_extend_12(v: u16) -> i16 {
    if v >= 2048 {
        v as i16 - 4096
    } else {
        v as i16
    }
}

/// Decodes `n_samples` frames of `n_signals` interleaved samples into one
/// vector per channel. Bytes beyond the declared length are ignored.
pub fn decode_format212(
    bytes: &[u8],
    n_samples: usize,
    n_signals: usize,
) -> Result<Vec<Vec<i16>>, WfdbError> {
    let total = n_samples * n_signals;
    let needed = format212_len(total);
    if bytes.len() < needed {
        return Err(WfdbError::TruncatedFile {
            needed,
            found: bytes.len(),
        });
    }

    let mut channels: Vec<Vec<i16>> = (0..n_signals)
        .map(|_| Vec::with_capacity(n_samples))
        .collect();
    let mut push = |flat: usize, value: i16| channels[flat % n_signals].push(value);

    let mut flat = 0;
    for group in bytes[..total / 2 * 3].chunks_exact(3) {
        let (b0, b1, b2) = (group[0] as u16, group[1] as u16, group[2] as u16);
        push(flat, sign_extend_12(b0 | ((b1 & 0x0F) << 8)));
        push(flat + 1, sign_extend_12(b2 | ((b1 >> 4) << 8)));
        flat += 2;
    }
    if total % 2 == 1 {
        let at = total / 2 * 3;
        let (b0, b1) = (bytes[at] as u16, bytes[at + 1] as u16);
        push(flat, sign_extend_12(b0 | ((b1 & 0x0F) << 8)));
    }
    Ok(channels)
}

/// Packs channels back into format 212. All channels must have equal length
/// and hold values in the 12-bit range; out-of-range values are truncated
/// to their low 12 bits.
pub fn encode_format212(channels: &[Vec<i16>]) -> Vec<u8> {
    let n_signals = channels.len();
    let n_samples = channels.first().map_or(0, Vec::len);
    debug_assert!(channels.iter().all(|c| c.len() == n_samples));
    let total = n_samples * n_signals;

    let sample = |flat: usize| (channels[flat % n_signals][flat / n_signals] as u16) & 0x0FFF;

    let mut out = Vec::with_capacity(format212_len(total));
    let mut flat = 0;
    while flat + 1 < total {
        let (s1, s2) = (sample(flat), sample(flat + 1));
        out.push((s1 & 0xFF) as u8);
        out.push(((s1 >> 8) | ((s2 >> 8) << 4)) as u8);
        out.push((s2 & 0xFF) as u8);
        flat += 2;
    }
    if flat < total {
        let s1 = sample(flat);
        out.push((s1 & 0xFF) as u8);
        out.push((s1 >> 8) as u8);
    }
    out
}
