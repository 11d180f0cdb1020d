use super::WfdbError;

/// Default ADC gain (adu per mV) when a signal line omits it or gives 0.
pub const DEFAULT_ADC_GAIN: f64 = 200.0;

/// One signal specification line of a header.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    pub file_name: String,
    pub format_code: u32,
    pub adc_gain: f64,
    pub adc_zero: i32,
    pub initial_value: i32,
    pub checksum: i16,
    pub description: String,
}

/// Parsed `.hea` file.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordHeader {
    pub record_name: String,
    pub n_signals: usize,
    pub sampling_rate: u32,
    pub n_samples: usize,
    pub signals: Vec<SignalSpec>,
}

fn malformed(msg: impl Into<String>) -> WfdbError {
    WfdbError::MalformedHeader(msg.into())
}

/// Leading run of ASCII digits (with optional sign) in `token`, so that
/// decorated fields such as `360/1`, `212x2` or `200(0)/mV` parse.
fn numeric_prefix(token: &str) -> &str {
    let bytes = token.as_bytes();
    let mut end = 0;
    if matches!(bytes.first(), Some(b'-' | b'+')) {
        end = 1;
    }
    while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
        end += 1;
    }
    &token[..end]
}

fn parse_field<T: std::str::FromStr>(token: &str, what: &str) -> Result<T, WfdbError> {
    numeric_prefix(token)
        .parse()
        .map_err(|_| malformed(format!("{what}: expected a number, found {token:?}")))
}

/// Parses the text of a `.hea` file.
///
/// Lines starting with `#` are comments. The record line must carry name,
/// signal count, sampling frequency and sample count; signal lines must
/// carry at least file name and format.
pub fn parse_header(text: &str) -> Result<RecordHeader, WfdbError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));

    let record_line = lines.next().ok_or_else(|| malformed("empty header"))?;
    let fields: Vec<&str> = record_line.split_whitespace().collect();
    if fields.len() < 4 {
        return Err(malformed(format!(
            "record line needs name, signal count, frequency and length; found {record_line:?}"
        )));
    }
    let record_name = fields[0].split('/').next().unwrap_or(fields[0]).to_owned();
    let n_signals: usize = parse_field(fields[1], "signal count")?;
    let sampling_rate: f64 = parse_field(fields[2], "sampling frequency")?;
    let n_samples: usize = parse_field(fields[3], "sample count")?;

    if n_signals == 0 {
        return Err(malformed("record declares 0 signals"));
    }
    if n_samples == 0 {
        return Err(malformed("record declares 0 samples"));
    }
    if !(sampling_rate >= 1.0 && sampling_rate.fract() == 0.0) {
        return Err(malformed(format!(
            "sampling frequency must be a positive integer, found {}",
            fields[2]
        )));
    }

    let mut signals = Vec::with_capacity(n_signals);
    for index in 0..n_signals {
        let line = lines
            .next()
            .ok_or_else(|| malformed(format!("missing signal line {index}")))?;
        signals.push(parse_signal_line(line, index)?);
    }

    Ok(RecordHeader {
        record_name,
        n_signals,
        sampling_rate: sampling_rate as u32,
        n_samples,
        signals,
    })
}

fn parse_signal_line(line: &str, index: usize) -> Result<SignalSpec, WfdbError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() < 2 {
        return Err(malformed(format!(
            "signal line {index} is too short: {line:?}"
        )));
    }
    let format_code: u32 = parse_field(fields[1], "signal format")?;
    if format_code != 212 {
        return Err(WfdbError::UnsupportedFormat {
            signal: index,
            format: format_code,
        });
    }

    let adc_gain = match fields.get(2) {
        Some(tok) => {
            let gain: f64 = parse_field(tok, "adc gain")?;
            if gain > 0.0 {
                gain
            } else {
                DEFAULT_ADC_GAIN
            }
        }
        None => DEFAULT_ADC_GAIN,
    };
    // fields[3] is the ADC resolution, which format 212 fixes at 12 bits.
    let adc_zero = fields
        .get(4)
        .map(|t| parse_field(t, "adc zero"))
        .transpose()?;
    let initial_value = fields
        .get(5)
        .map(|t| parse_field(t, "initial value"))
        .transpose()?;
    let checksum = fields
        .get(6)
        .map(|t| parse_field::<i32>(t, "checksum"))
        .transpose()?
        .unwrap_or(0);
    let description = if fields.len() > 8 {
        fields[8..].join(" ")
    } else {
        String::new()
    };

    Ok(SignalSpec {
        file_name: fields[0].to_owned(),
        format_code,
        adc_gain,
        adc_zero: adc_zero.unwrap_or(0),
        initial_value: initial_value.unwrap_or(0),
        // Headers write the checksum either signed or as an unsigned 16-bit value.
        checksum: checksum as i16,
        description,
    })
}
