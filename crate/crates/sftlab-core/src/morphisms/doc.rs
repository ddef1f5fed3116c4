use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{conditioned_perm, partial_shift, shift, symbol_perm, track_swap, BlockMap, Condition, Cylinder};
use crate::error::{Error, Result};
use crate::lattice::Point;
use crate::perm::Perm;
use crate::sft::{parse_point, SftSpec, Symbol};

/// JSON form of a block map: an explicit rule table or a named builder.
/// Track numbers in builder documents start at 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlockMapDoc {
    Builder(BuilderDoc),
    Table(TableDoc),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableDoc {
    pub neighborhood: Vec<Point>,
    pub rule: Vec<RuleEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RuleEntry {
    #[serde(rename = "in")]
    pub input: Vec<String>,
    pub out: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BuilderDoc {
    pub builder: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub track: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tracks: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Point>,
    /// Images of the symbols (symbol_perm) or of the track digits (conditioned_perm).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionDoc>,
    /// Maps applied right to left (compose).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<BlockMapDoc>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionDoc {
    pub track: usize,
    /// Each cylinder maps "x,y" offsets to track digits.
    pub cylinders: Vec<HashMap<String, usize>>,
}

fn track0(t: Option<usize>) -> Result<usize> {
    match t {
        Some(t) if t >= 1 => Ok(t - 1),
        Some(t) => Err(Error::InvalidTrack(t)),
        None => Err(Error::InvalidMap("missing track".into())),
    }
}

fn digits(values: &[Value]) -> Result<Vec<usize>> {
    values
        .iter()
        .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(|| Error::InvalidMap(format!("expected a digit, got {v}"))))
        .collect()
}

fn symbol_of_value(spec: &SftSpec, v: &Value) -> Result<Symbol> {
    match v {
        Value::String(s) => spec.symbol_index(s),
        other => spec.symbol_index(&other.to_string()),
    }
}

impl BlockMapDoc {
    pub fn build(&self, spec: &SftSpec) -> Result<BlockMap> {
        let dim = spec.dim();
        let k = spec.alphabet_size();
        match self {
            BlockMapDoc::Table(t) => {
                let mut table = HashMap::new();
                for e in &t.rule {
                    let input = e.input.iter().map(|s| spec.symbol_index(s)).collect::<Result<Vec<_>>>()?;
                    table.insert(input, spec.symbol_index(&e.out)?);
                }
                BlockMap::from_table(dim, k, t.neighborhood.clone(), table)
            }
            BlockMapDoc::Builder(b) => {
                let v = || b.v.clone().ok_or_else(|| Error::InvalidMap("missing v".into()));
                match b.builder.as_str() {
                    "identity" => Ok(BlockMap::identity(dim, k)),
                    "shift" => shift(dim, k, &v()?),
                    "symbol_perm" => {
                        let images = b.perm.as_ref().ok_or_else(|| Error::InvalidMap("missing perm".into()))?;
                        let images = images.iter().map(|x| symbol_of_value(spec, x).map(usize::from)).collect::<Result<Vec<_>>>()?;
                        symbol_perm(dim, &Perm::from_images(images)?)
                    }
                    "track_swap" => {
                        let [i, j] = b.tracks.unwrap_or([1, 2]);
                        track_swap(spec, track0(Some(i))?, track0(Some(j))?)
                    }
                    "partial_shift" => partial_shift(spec, track0(b.track)?, &v()?),
                    "conditioned_perm" => {
                        let images = digits(b.perm.as_deref().ok_or_else(|| Error::InvalidMap("missing perm".into()))?)?;
                        let pt = track0(b.track)?;
                        let cond = match &b.condition {
                            None => Condition::all(if pt == 0 { 1 } else { 0 }),
                            Some(c) => {
                                let track = track0(Some(c.track))?;
                                let cylinders = c
                                    .cylinders
                                    .iter()
                                    .map(|m| {
                                        m.iter()
                                            .map(|(key, &d)| parse_point(key).map(|p| (p, d)).map_err(Error::InvalidCondition))
                                            .collect::<Result<Cylinder>>()
                                    })
                                    .collect::<Result<Vec<_>>>()?;
                                Condition { track, cylinders }
                            }
                        };
                        conditioned_perm(spec, pt, &Perm::from_images(images)?, &cond)
                    }
                    "compose" => {
                        let maps = b.maps.as_ref().ok_or_else(|| Error::InvalidMap("missing maps".into()))?;
                        let built = maps.iter().map(|m| m.build(spec)).collect::<Result<Vec<_>>>()?;
                        if built.is_empty() {
                            return Err(Error::InvalidMap("empty composition".into()));
                        }
                        Ok(BlockMap::compose_all(&built))
                    }
                    other => Err(Error::InvalidMap(format!("unknown builder {other:?}"))),
                }
            }
        }
    }
}

impl BlockMap {
    pub fn from_json(spec: &SftSpec, text: &str) -> Result<BlockMap> {
        let doc: BlockMapDoc = serde_json::from_str(text).map_err(|e| Error::InvalidMap(e.to_string()))?;
        doc.build(spec)
    }

    /// Rule-table JSON over the admissible neighborhood patterns.
    pub fn to_table_doc(&self, spec: &SftSpec, budget: &mut crate::Budget) -> Result<TableDoc> {
        let t = self.tabulate(spec, budget)?;
        let mut rule: Vec<RuleEntry> = t
            .table()
            .expect("tabulated")
            .iter()
            .map(|(k, &v)| RuleEntry {
                input: k.iter().map(|&s| spec.symbol_name(s).to_string()).collect(),
                out: spec.symbol_name(v).to_string(),
            })
            .collect();
        rule.sort_by(|a, b| a.input.cmp(&b.input));
        Ok(TableDoc { neighborhood: t.neighborhood().to_vec(), rule })
    }
}
