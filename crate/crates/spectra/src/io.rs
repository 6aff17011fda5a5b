use std::io::{Read, Write};

use fieldlab_numerics::Spectrum;

use crate::{Result, SpectraError};

/// CSV with columns index, eigenvalue, multiplicity (one row per distinct
/// value, merged at relative tolerance 1e-12).
pub fn write_csv<W: Write>(sp: &Spectrum, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["index", "eigenvalue", "multiplicity"])?;
    for (i, (v, m)) in sp.multiplicities(1e-12).iter().enumerate() {
        wr.write_record(&[i.to_string(), format!("{v:.17e}"), m.to_string()])?;
    }
    wr.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Read back the eigenvalue multiset written by [`write_csv`] as a finite
/// spectrum.
pub fn read_csv<R: Read>(r: R) -> Result<Spectrum> {
    let mut rd = csv::Reader::from_reader(r);
    let mut values = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let v: f64 = rec
            .get(1)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| SpectraError::InvalidArgument("bad eigenvalue field".into()))?;
        let m: usize = rec
            .get(2)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| SpectraError::InvalidArgument("bad multiplicity field".into()))?;
        values.extend(std::iter::repeat_n(v, m));
    }
    Ok(Spectrum::finite(values)?)
}

pub fn spectrum_to_json(sp: &Spectrum) -> Result<String> {
    Ok(serde_json::to_string_pretty(sp)?)
}

pub fn spectrum_from_json(s: &str) -> Result<Spectrum> {
    Ok(serde_json::from_str(s)?)
}
