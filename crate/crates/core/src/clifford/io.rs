use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{CliffordSystem, Generators, Provenance};
use crate::algebra::{DenseMatrix, SignedPermMatrix};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    m: usize,
    l: usize,
    provenance: Option<Provenance>,
    encoding: Encoding,
    generators: Vec<Value>,
}

#[derive(Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum Encoding {
    SignedPerm,
    Dense,
}

/// Serializes a system to the JSON system format.
///
/// Exact systems use `"signed_perm"` with one `[row, sign]` pair per column;
/// dense ones store each matrix as a flat row-major array.
pub fn system_to_json(c: &CliffordSystem) -> String {
    let (encoding, generators) = match c.generators() {
        Generators::SignedPerm(g) => (
            Encoding::SignedPerm,
            g.iter()
                .map(|p| Value::from((0..p.dim()).map(|col| {
                    let (r, s) = p.column(col);
                    Value::from(vec![Value::from(r), Value::from(s)])
                }).collect::<Vec<_>>()))
                .collect(),
        ),
        Generators::Dense(g) => (Encoding::Dense, g.iter().map(|p| Value::from(p.as_slice().to_vec())).collect()),
    };
    let file = SystemFile { m: c.m(), l: c.l(), provenance: c.provenance(), encoding, generators };
    let mut out = serde_json::to_string_pretty(&file).expect("system file serializes");
    out.push('\n');
    out
}

pub fn system_from_json(text: &str) -> Result<CliffordSystem> {
    let file: SystemFile = serde_json::from_str(text)?;
    let n = 2 * file.l;
    if file.generators.len() != file.m + 1 {
        return Err(Error::MalformedSystem(format!(
            "m = {} needs {} generators, file has {}",
            file.m,
            file.m + 1,
            file.generators.len()
        )));
    }
    let sys = match file.encoding {
        Encoding::SignedPerm => {
            let gens = file.generators.iter().map(|g| parse_signed_perm(g, n)).collect::<Result<Vec<_>>>()?;
            CliffordSystem::from_signed_perm(gens, file.provenance)?
        }
        Encoding::Dense => {
            let gens = file
                .generators
                .iter()
                .map(|g| {
                    let data: Vec<f64> = serde_json::from_value(g.clone())?;
                    DenseMatrix::from_row_major(n, n, data).map_err(|e| Error::MalformedSystem(e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            CliffordSystem::from_dense(gens, file.provenance)?
        }
    };
    if sys.l() != file.l {
        return Err(Error::MalformedSystem(format!("declared l = {} but matrices have l = {}", file.l, sys.l())));
    }
    Ok(sys)
}

fn parse_signed_perm(value: &Value, n: usize) -> Result<SignedPermMatrix> {
    let pairs: Vec<(usize, i8)> = serde_json::from_value(value.clone())?;
    if pairs.len() != n {
        return Err(Error::MalformedSystem(format!("signed permutation has {} columns, expected {n}", pairs.len())));
    }
    let (row, sign) = pairs.into_iter().unzip();
    SignedPermMatrix::new(row, sign).map_err(|e| Error::MalformedSystem(e.to_string()))
}

pub fn read_system(path: &Path) -> Result<CliffordSystem> {
    system_from_json(&std::fs::read_to_string(path)?)
}

/// Writes via a sibling temporary file and rename so readers never see a partial file.
pub fn write_system(path: &Path, c: &CliffordSystem) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, system_to_json(c))?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_system, conjugate_system};

    #[test]
    fn signed_perm_round_trip_is_lossless() {
        let c = build_system(5, 2, 1).unwrap();
        let back = system_from_json(&system_to_json(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn dense_round_trip() {
        let c = build_system(2, 1, 0).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut a = DenseMatrix::identity(4);
        a[(0, 0)] = s;
        a[(0, 1)] = -s;
        a[(1, 0)] = s;
        a[(1, 1)] = s;
        let conj = conjugate_system(&c, &a).unwrap();
        assert_eq!(system_from_json(&system_to_json(&conj)).unwrap(), conj);
    }

    #[test]
    fn rejects_corrupt_files() {
        let c = build_system(1, 2, 0).unwrap();
        let text = system_to_json(&c);
        assert!(system_from_json(&text.replacen("\"m\": 1", "\"m\": 2", 1)).is_err());
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["generators"][1][0][1] = Value::from(-1);
        assert!(matches!(system_from_json(&v.to_string()), Err(Error::MalformedSystem(_))));
        assert!(system_from_json("{}").is_err());
    }
}
