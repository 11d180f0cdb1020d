//! MIT annotation format.
//!
//! The file is a stream of little-endian 16-bit words. The high 6 bits hold
//! an annotation code and the low 10 bits a time delta (or a payload for the
//! modifier codes below). Modifier words follow the annotation they modify.
//!
//! | code | meaning                                                         |
//! |------|-----------------------------------------------------------------|
//! | 0    | end of file when the delta is also 0                            |
//! | 1-49 | annotation at `previous time + delta`                           |
//! | 59   | SKIP: next 4 bytes are a signed 32-bit interval, high word first |
//! | 60   | NUM: set `num` (sticky)                                         |
//! | 61   | SUB: set `subtype`                                              |
//! | 62   | CHN: set `chan` (sticky)                                        |
//! | 63   | AUX: payload of `delta` bytes, padded to an even length         |

use super::codes::{symbol_for_code, AnnotationCode, MAX_ANNOTATION_CODE};
use super::WfdbError;

const SKIP: u8 = 59;
const NUM: u8 = 60;
const SUB: u8 = 61;
const CHN: u8 = 62;
const AUX: u8 = 63;
const DATA_MASK: u16 = 0x03FF;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    /// Absolute sample position.
    pub sample_index: u64,
    pub code: AnnotationCode,
    /// Display mnemonic, `' '` when the code has none.
    pub symbol: char,
    pub subtype: i16,
    pub chan: u8,
    pub num: i16,
    pub aux: Option<Vec<u8>>,
}

impl Annotation {
    pub fn new(sample_index: u64, code: AnnotationCode) -> Self {
        Annotation {
            sample_index,
            code,
            symbol: symbol_for_code(code).unwrap_or(' '),
            subtype: 0,
            chan: 0,
            num: 0,
            aux: None,
        }
    }

    pub fn with_aux(mut self, aux: &[u8]) -> Self {
        self.aux = Some(aux.to_vec());
        self
    }
}

fn sign_extend_10(v: u16) -> i16 {
    if v & 0x200 != 0 {
        v as i16 - 0x400
    } else {
        v as i16
    }
}

/// Parses an annotation file.
pub fn parse_annotations(bytes: &[u8]) -> Result<Vec<Annotation>, WfdbError> {
    let word_at = |pos: usize| -> Option<u16> {
        bytes
            .get(pos..pos + 2)
            .map(|b| u16::from_le_bytes([b[0], b[1]]))
    };

    let mut out: Vec<Annotation> = Vec::new();
    let mut time: i64 = 0;
    let mut chan: u8 = 0;
    let mut num: i16 = 0;
    let mut pos = 0;

    loop {
        let offset = pos;
        let word = word_at(pos).ok_or(WfdbError::MissingEof)?;
        pos += 2;
        let code = (word >> 10) as u8;
        let data = word & DATA_MASK;

        match code {
            0 if data == 0 => return Ok(out),
            1..=MAX_ANNOTATION_CODE => {
                time += i64::from(data);
                let mut ann = Annotation::new(time as u64, code);
                ann.chan = chan;
                ann.num = num;
                out.push(ann);
            }
            SKIP => {
                let hi = word_at(pos).ok_or(WfdbError::MissingEof)?;
                let lo = word_at(pos + 2).ok_or(WfdbError::MissingEof)?;
                pos += 4;
                let interval = ((u32::from(hi) << 16) | u32::from(lo)) as i32;
                time += i64::from(interval);
                if time < 0 || out.last().is_some_and(|a| (a.sample_index as i64) > time) {
                    return Err(WfdbError::InvalidSkip { offset });
                }
            }
            NUM => {
                num = sign_extend_10(data);
                if let Some(last) = out.last_mut() {
                    last.num = num;
                }
            }
            SUB => {
                if let Some(last) = out.last_mut() {
                    last.subtype = sign_extend_10(data);
                }
            }
            CHN => {
                chan = data as u8;
                if let Some(last) = out.last_mut() {
                    last.chan = chan;
                }
            }
            AUX => {
                let len = data as usize;
                let padded = len + len % 2;
                let payload = bytes
                    .get(pos..pos + len)
                    .ok_or(WfdbError::AuxOverrun { offset, len })?;
                if bytes.len() < pos + padded {
                    return Err(WfdbError::AuxOverrun { offset, len });
                }
                if let Some(last) = out.last_mut() {
                    last.aux = Some(payload.to_vec());
                }
                pos += padded;
            }
            _ => return Err(WfdbError::UnknownCode { code, offset }),
        }
    }
}

/// Serialises annotations in the MIT format, including the EOF word.
///
/// Deltas above 1023 samples are written through a SKIP word. `num` and
/// `chan` are written only when they change, matching how the reader
/// carries them forward.
pub fn encode_annotations(annotations: &[Annotation]) -> Vec<u8> {
    let mut out = Vec::new();
    let put = |out: &mut Vec<u8>, code: u8, data: u16| {
        let word = (u16::from(code) << 10) | (data & DATA_MASK);
        out.extend_from_slice(&word.to_le_bytes());
    };

    let mut time: i64 = 0;
    let mut chan: u8 = 0;
    let mut num: i16 = 0;
    for ann in annotations {
        let delta = ann.sample_index as i64 - time;
        if (0..=DATA_MASK as i64).contains(&delta) {
            put(&mut out, ann.code, delta as u16);
        } else {
            put(&mut out, SKIP, 0);
            let interval = delta as i32 as u32;
            out.extend_from_slice(&((interval >> 16) as u16).to_le_bytes());
            out.extend_from_slice(&(interval as u16).to_le_bytes());
            put(&mut out, ann.code, 0);
        }
        time = ann.sample_index as i64;

        if ann.subtype != 0 {
            put(&mut out, SUB, ann.subtype as u16);
        }
        if ann.chan != chan {
            put(&mut out, CHN, u16::from(ann.chan));
            chan = ann.chan;
        }
        if ann.num != num {
            put(&mut out, NUM, ann.num as u16);
            num = ann.num;
        }
        if let Some(aux) = &ann.aux {
            put(&mut out, AUX, aux.len() as u16);
            out.extend_from_slice(aux);
            if aux.len() % 2 == 1 {
                out.push(0);
            }
        }
    }
    put(&mut out, 0, 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn eof_only() {
        assert!(parse_annotations(&[0, 0]).unwrap().is_empty());
    }

    #[test]
    fn delta_accumulates() {
        // 'N' at 1000 via SKIP, then word 0x04C8 adds 200 samples.
        let mut bytes = vec![];
        bytes.extend_from_slice(&(59u16 << 10).to_le_bytes());
        bytes.extend_from_slice(&0u16.to_le_bytes());
        bytes.extend_from_slice(&1000u16.to_le_bytes());
        bytes.extend_from_slice(&(1u16 << 10).to_le_bytes());
        bytes.extend_from_slice(&[0xC8, 0x04]);
        bytes.extend_from_slice(&[0, 0]);
        let anns = parse_annotations(&bytes).unwrap();
        assert_eq!(anns.len(), 2);
        assert_eq!(anns[0].sample_index, 1000);
        assert_eq!(anns[1].sample_index, 1200);
        assert_eq!(anns[1].code, 1);
        assert_eq!(anns[1].symbol, 'N');
    }

    #[test]
    fn skip_high_word_first() {
        // interval 0x0001_0002 = 65538
        let bytes = [0x00, 0xEC, 0x01, 0x00, 0x02, 0x00, 0x00, 0x04, 0, 0];
        let anns = parse_annotations(&bytes).unwrap();
        assert_eq!(anns[0].sample_index, 65538);
    }

    #[test]
    fn modifiers_apply_to_previous() {
        let mut rhythm = Annotation::new(18, 28).with_aux(b"(N");
        rhythm.chan = 1;
        let mut beat = Annotation::new(77, 5);
        beat.subtype = 2;
        beat.num = -3;
        beat.chan = 1;
        let bytes = encode_annotations(&[rhythm.clone(), beat.clone()]);
        let parsed = parse_annotations(&bytes).unwrap();
        assert_eq!(parsed, vec![rhythm, beat]);
    }

    #[test]
    fn odd_aux_is_padded() {
        let ann = Annotation::new(5, 22).with_aux(b"abc");
        let bytes = encode_annotations(std::slice::from_ref(&ann));
        assert_eq!(bytes.len(), 2 + 2 + 4 + 2);
        assert_eq!(parse_annotations(&bytes).unwrap(), vec![ann]);
    }

    #[test]
    fn missing_eof() {
        assert!(matches!(parse_annotations(&[]), Err(WfdbError::MissingEof)));
        assert!(matches!(
            parse_annotations(&[0xC8, 0x04]),
            Err(WfdbError::MissingEof)
        ));
        assert!(matches!(
            parse_annotations(&[0xC8, 0x04, 0x00]),
            Err(WfdbError::MissingEof)
        ));
    }

    #[test]
    fn aux_overrun() {
        // AUX claiming 10 bytes with only 2 present.
        let word = (63u16 << 10) | 10;
        let mut bytes = vec![0xC8, 0x04];
        bytes.extend_from_slice(&word.to_le_bytes());
        bytes.extend_from_slice(&[1, 2]);
        assert!(matches!(
            parse_annotations(&bytes),
            Err(WfdbError::AuxOverrun { len: 10, .. })
        ));
    }

    #[test]
    fn reserved_code() {
        let word = (55u16 << 10) | 3;
        let mut bytes = word.to_le_bytes().to_vec();
        bytes.extend_from_slice(&[0, 0]);
        assert!(matches!(
            parse_annotations(&bytes),
            Err(WfdbError::UnknownCode {
                code: 55,
                offset: 0
            })
        ));
    }

    fn arb_annotation() -> impl Strategy<Value = (u64, u8, i16, u8, i16, Option<Vec<u8>>)> {
        (
            0u64..5000,
            1u8..=49,
            -5i16..5,
            0u8..3,
            -5i16..5,
            proptest::option::of(proptest::collection::vec(any::<u8>(), 0..7)),
        )
    }

    proptest! {
        #[test]
        fn encode_parse_identity(items in proptest::collection::vec(arb_annotation(), 0..40)) {
            let mut t = 0u64;
            let anns: Vec<Annotation> = items
                .into_iter()
                .map(|(gap, code, subtype, chan, num, aux)| {
                    t += gap;
                    let mut a = Annotation::new(t, code);
                    a.subtype = subtype;
                    a.chan = chan;
                    a.num = num;
                    a.aux = aux;
                    a
                })
                .collect();
            let parsed = parse_annotations(&encode_annotations(&anns)).unwrap();
            prop_assert_eq!(
                parsed.last().map(|a| a.sample_index),
                anns.last().map(|a| a.sample_index)
            );
            prop_assert_eq!(parsed, anns);
        }
    }
}
