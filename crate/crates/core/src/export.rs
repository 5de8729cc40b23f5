//! CSV and JSON encodings.
//!
//! Every JSON document carries `"schema": 1`. Complex numbers are `[re, im]`
//! pairs and floats are written in shortest round-trip form, so a state that
//! is exported and read back reproduces its measure bit for bit.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::cpx;
use crate::error::{Error, Result};
use crate::evolve::Topology;
use crate::stationary::{Measure, SeedSequence, WaveState};
use crate::C64;

pub const SCHEMA_VERSION: u32 = 1;

/// `x,mu` rows, optionally with a third `mu_closed_form` column. LF endings.
pub fn measure_csv(measure: &Measure, closed_form: Option<&[f64]>) -> Result<String> {
    if let Some(cf) = closed_form {
        if cf.len() != measure.values().len() {
            return Err(Error::Parse("closed-form column length differs from the measure".into()));
        }
    }
    let mut out = String::from(if closed_form.is_some() { "x,mu,mu_closed_form\n" } else { "x,mu\n" });
    for (i, (x, mu)) in measure.iter().enumerate() {
        match closed_form {
            Some(cf) => out.push_str(&format!("{x},{mu},{}\n", cf[i])),
            None => out.push_str(&format!("{x},{mu}\n")),
        }
    }
    Ok(out)
}

struct SiteMap<'a, T>(Topology, &'a [T]);

impl<T: Serialize> Serialize for SiteMap<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.1.len()))?;
        for (x, v) in self.0.sites().zip(self.1) {
            map.serialize_entry(&x.to_string(), v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct MeasureOut<'a> {
    schema: u32,
    topology: Topology,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<usize>,
    mu: SiteMap<'a, f64>,
}

pub fn measure_json(measure: &Measure, period: Option<usize>) -> String {
    let doc = MeasureOut {
        schema: SCHEMA_VERSION,
        topology: measure.topology(),
        period,
        mu: SiteMap(measure.topology(), measure.values()),
    };
    serde_json::to_string_pretty(&doc).expect("measure serializes")
}

#[derive(Serialize)]
struct StateOut<'a> {
    schema: u32,
    topology: Topology,
    state: SiteMap<'a, [[f64; 2]; 3]>,
}

#[derive(Deserialize)]
struct StateIn {
    schema: u32,
    topology: Topology,
    state: BTreeMap<String, [[f64; 2]; 3]>,
}

pub fn state_json(state: &WaveState) -> String {
    let pairs: Vec<[[f64; 2]; 3]> = state.amplitudes().iter().map(|v| v.map(cpx::to_pair)).collect();
    let doc = StateOut { schema: SCHEMA_VERSION, topology: state.topology(), state: SiteMap(state.topology(), &pairs) };
    serde_json::to_string_pretty(&doc).expect("state serializes")
}

pub fn state_from_json(text: &str) -> Result<WaveState> {
    let doc: StateIn = serde_json::from_str(text)?;
    check_schema(doc.schema)?;
    let topo = doc.topology;
    let mut amps = vec![None; topo.len()];
    for (key, v) in doc.state {
        let x: i64 = key.parse().map_err(|_| Error::Parse(format!("bad site label {key:?}")))?;
        let i = match topo {
            Topology::Cycle(n) if !(0..n as i64).contains(&x) => None,
            _ => topo.index(x),
        }
        .ok_or_else(|| Error::Parse(format!("site {x} is not part of {topo}")))?;
        amps[i] = Some(v.map(cpx::from_pair));
    }
    let amps = amps
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Parse(format!("missing site {}", topo.site(i)))))
        .collect::<Result<Vec<_>>>()?;
    WaveState::new(topo, amps)
}

fn check_schema(schema: u32) -> Result<()> {
    if schema != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema version {schema}")));
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SeedsIn {
    Bare(Vec<[f64; 2]>),
    Doc {
        schema: u32,
        #[serde(default)]
        start: Option<i64>,
        values: Vec<[f64; 2]>,
    },
}

/// Reads a seed sequence for `topo`.
///
/// Accepts either a bare array of `[re, im]` pairs or
/// `{"schema": 1, "start": s, "values": [...]}`. Without `start`, a cycle's
/// values label sites `0..N`; a window's values label `[−W, W]` if there are
/// `2W+1` of them (and `φ_{−W−1}` is padded with zero) or `[−W−1, W]` if
/// there are `2W+2`.
pub fn seeds_from_json(text: &str, topo: Topology) -> Result<SeedSequence> {
    let (start, values) = match serde_json::from_str::<SeedsIn>(text)? {
        SeedsIn::Bare(v) => (None, v),
        SeedsIn::Doc { schema, start, values } => {
            check_schema(schema)?;
            (start, values)
        }
    };
    let values: Vec<C64> = values.into_iter().map(cpx::from_pair).collect();
    let seeds = match (start, topo) {
        (Some(s), _) => SeedSequence::new(s, values)?,
        (None, Topology::Cycle(_)) => SeedSequence::cycle(values)?,
        (None, Topology::Window(w)) if values.len() == 2 * w + 1 => SeedSequence::window_padded(w, values)?,
        (None, Topology::Window(w)) => SeedSequence::new(-(w as i64) - 1, values)?,
    };
    seeds.check_covers(topo)?;
    Ok(seeds)
}

pub fn seeds_json(seeds: &SeedSequence) -> String {
    let values: Vec<[f64; 2]> = seeds.values().iter().copied().map(cpx::to_pair).collect();
    serde_json::json!({ "schema": SCHEMA_VERSION, "start": seeds.start(), "values": values }).to_string()
}

/// Writes `contents` to a sibling temp file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Parse(format!("{} is not a file path", path.display())))?
        .to_string_lossy();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
