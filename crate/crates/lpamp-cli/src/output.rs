use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::CliError;

/// Shortest round-trip decimal; exponent notation outside [10⁻⁴, 10¹⁵).
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// CSV sink writing to a file or stdout.
pub struct Table {
    inner: csv::Writer<Box<dyn Write>>,
}

impl Table {
    pub fn create(out: Option<&Path>, header: &[&str]) -> Result<Self, CliError> {
        let sink: Box<dyn Write> = match out {
            Some(path) => Box::new(io::BufWriter::new(
                File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
            )),
            None => Box::new(io::stdout().lock()),
        };
        let mut inner = csv::Writer::from_writer(sink);
        inner.write_record(header)?;
        Ok(Self { inner })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.inner.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(1e-6), "1e-6");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(opt(None), "");
    }
}
