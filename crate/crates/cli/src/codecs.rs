//! `--codec` specifications.

use std::fs;
use std::path::Path;

use lelc_core::compound::{CompoundCode, CompoundConfig};
use lelc_core::fnw::{FlipNWrite, FnwConfig};
use lelc_core::prefixcode::{ChunkedPrefixCode, PrefixCode, PrefixCodeTable, TreeCode};
use lelc_core::{CodebookMap, Error, LineCodec};

use crate::CliError;

pub const SPEC_HELP: &str = "fnw:K | fnw2:K,F | map:M | tc1 | tc1p | tc2 | pfx:FILE | compound:K,M";

fn usage(spec: &str) -> CliError {
    CliError::Usage(format!("bad codec '{spec}', expected {SPEC_HELP}"))
}

fn number(s: &str, spec: &str) -> Result<usize, CliError> {
    s.trim().parse().map_err(|_| usage(spec))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn load_map(path: &str) -> Result<CodebookMap, CliError> {
    Ok(read_text(Path::new(path))?.parse::<CodebookMap>()?)
}

pub fn parse(spec: &str) -> Result<Box<dyn LineCodec>, CliError> {
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    let codec: Box<dyn LineCodec> = match (kind, arg) {
        ("fnw", Some(k)) => Box::new(FlipNWrite(FnwConfig::single(number(k, spec)?)?)),
        ("fnw2", Some(a)) => {
            let (k, f) = a.split_once(',').ok_or_else(|| usage(spec))?;
            Box::new(FlipNWrite(FnwConfig::two_level(number(k, spec)?, number(f, spec)?)?))
        }
        ("map", Some(m)) => Box::new(load_map(m)?),
        ("tc1", None) => Box::new(TreeCode::tc1()),
        ("tc2", None) => Box::new(TreeCode::tc2()),
        ("tc1p", None) => Box::new(ChunkedPrefixCode::tc1_prime()),
        ("pfx", Some(file)) => {
            let table = read_text(Path::new(file))?.parse::<PrefixCodeTable>()?;
            let name = format!("pfx:{file}");
            Box::new(TreeCode::new(name, PrefixCode::new(table)?))
        }
        ("compound", Some(a)) => {
            let (k, m) = a.split_once(',').ok_or_else(|| usage(spec))?;
            Box::new(CompoundCode(CompoundConfig::new(number(k, spec)?, load_map(m)?)?))
        }
        _ => return Err(usage(spec)),
    };
    Ok(codec)
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_specs() {
        for (spec, name) in
            [("fnw:8", "fnw:8"), ("fnw2:4,4", "fnw2:4,4"), ("tc1", "tc1"), ("tc2", "tc2"), ("tc1p", "tc1p")]
        {
            assert_eq!(parse(spec).unwrap().name(), name);
        }
    }

    #[test]
    fn bad_specs() {
        for spec in ["", "fnw", "fnw:x", "fnw2:4", "tc1:3", "huffman", "compound:16"] {
            assert!(matches!(parse(spec), Err(CliError::Usage(_))), "{spec}");
        }
        assert!(matches!(parse("fnw:0"), Err(CliError::Core(Error::InvalidParameter(_)))));
        assert!(matches!(parse("map:/nonexistent/file"), Err(CliError::Io(..))));
    }
}
