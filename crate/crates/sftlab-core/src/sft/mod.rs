//! Shifts of finite type: specifications, admissibility, exact counting,
//! extension tables, entropy estimates, periodic points and mixing checks.

mod config;
mod count;
mod line;
mod mixing;
mod search;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use config::{FiniteConfig, Pattern, PeriodicConfig};
pub use count::{
    count_fixed_points, count_patterns, entropy_estimates, extension_table, extensions_of, fixed_points,
    CountResult, EntropyEstimate, Exactness, ExtensionTable,
};
pub use mixing::{corner_decrease, strong_irreducibility_check, IrreducibilityReport};
pub use search::{enumerate_patterns, PatternSpace};

pub(crate) use line::LineGraph;

use crate::error::{Error, Result};
use crate::lattice::{norm_inf, FiniteSet, Point};

/// Symbols are indices into the alphabet.
pub type Symbol = u8;

/// A validated SFT: alphabet, window containing the origin, and forbidden
/// window patterns (values listed in window order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SftSpec {
    dim: usize,
    alphabet: Vec<String>,
    zero: Option<Symbol>,
    tracks: Option<Vec<usize>>,
    window: Vec<Point>,
    forbidden: HashSet<Vec<Symbol>>,
}

impl SftSpec {
    pub fn new(
        dim: usize,
        alphabet: Vec<String>,
        zero: Option<Symbol>,
        tracks: Option<Vec<usize>>,
        window: Vec<Point>,
        forbidden: Vec<Vec<Symbol>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        if alphabet.is_empty() || alphabet.len() > 256 {
            return Err(Error::InvalidSpec(format!("alphabet size {} not in 1..=256", alphabet.len())));
        }
        let mut seen = HashSet::new();
        for a in &alphabet {
            if !seen.insert(a) {
                return Err(Error::InvalidSpec(format!("duplicate symbol {a:?}")));
            }
        }
        let mut window = window;
        window.sort();
        window.dedup();
        if window.iter().any(|w| w.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: window.iter().map(|w| w.len()).find(|&l| l != dim).unwrap_or(0) });
        }
        if !window.contains(&vec![0; dim]) {
            return Err(Error::OriginNotInWindow);
        }
        let k = alphabet.len();
        for (i, f) in forbidden.iter().enumerate() {
            if f.len() != window.len() {
                return Err(Error::DomainMismatch { index: i, detail: format!("{} values for a window of {} cells", f.len(), window.len()) });
            }
            if let Some(&s) = f.iter().find(|&&s| s as usize >= k) {
                return Err(Error::UnknownSymbol(s.to_string()));
            }
        }
        if let Some(t) = &tracks {
            if t.is_empty() || t.contains(&0) || t.iter().product::<usize>() != k {
                return Err(Error::InvalidSpec(format!("track sizes {t:?} do not multiply to {k}")));
            }
        }
        if let Some(z) = zero {
            if z as usize >= k {
                return Err(Error::UnknownSymbol(z.to_string()));
            }
        }
        let spec = SftSpec { dim, alphabet, zero, tracks, window, forbidden: forbidden.into_iter().collect() };
        if let Some(z) = zero {
            if !spec.window_ok(&vec![z; spec.window.len()]) {
                return Err(Error::NoZeroPoint);
            }
        }
        Ok(spec)
    }

    /// The full shift on `k` symbols named "0", "1", …, zero = "0".
    pub fn full_shift(k: usize, dim: usize) -> Self {
        let alphabet = (0..k).map(|i| i.to_string()).collect();
        SftSpec::new(dim, alphabet, Some(0), None, vec![vec![0; dim]], Vec::new()).expect("full shift is valid")
    }

    /// The full shift over a product alphabet with the given track sizes.
    /// Symbols are named by their digits joined with '.', first track most significant.
    pub fn full_shift_tracks(sizes: &[usize], dim: usize) -> Self {
        let k: usize = sizes.iter().product();
        let alphabet = (0..k)
            .map(|s| digits_of(s, sizes).iter().map(|d| d.to_string()).collect::<Vec<_>>().join("."))
            .collect();
        SftSpec::new(dim, alphabet, Some(0), Some(sizes.to_vec()), vec![vec![0; dim]], Vec::new())
            .expect("product full shift is valid")
    }

    /// The golden mean shift in Z: no two adjacent 1s.
    pub fn golden_mean() -> Self {
        SftSpec::new(1, vec!["0".into(), "1".into()], Some(0), None, vec![vec![0], vec![1]], vec![vec![1, 1]])
            .expect("golden mean is valid")
    }

    /// The triangular hard-square shift in Z²: 1s may not be adjacent
    /// horizontally, vertically, or along the (1,1) diagonal.
    pub fn triangular_hard_square() -> Self {
        let window = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        // window order: (0,0), (0,1), (1,0), (1,1)
        let bad_pairs = [(0usize, 1usize), (0, 2), (1, 3), (2, 3), (0, 3)];
        let mut forbidden = Vec::new();
        for bits in 0u8..16 {
            let v: Vec<Symbol> = (0..4).map(|i| (bits >> i) & 1).collect();
            if bad_pairs.iter().any(|&(a, b)| v[a] == 1 && v[b] == 1) {
                forbidden.push(v);
            }
        }
        SftSpec::new(2, vec!["0".into(), "1".into()], Some(0), None, window, forbidden).expect("hard square is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn zero(&self) -> Option<Symbol> {
        self.zero
    }

    pub fn require_zero(&self) -> Result<Symbol> {
        self.zero.ok_or(Error::NoZeroPoint)
    }

    pub fn tracks(&self) -> Option<&[usize]> {
        self.tracks.as_deref()
    }

    /// Window cells in lexicographic order.
    pub fn window(&self) -> &[Point] {
        &self.window
    }

    pub fn window_set(&self) -> FiniteSet {
        FiniteSet::from_points(self.dim, self.window.iter().cloned())
    }

    /// Forbidden patterns in a deterministic order.
    pub fn forbidden(&self) -> Vec<Vec<Symbol>> {
        let mut f: Vec<_> = self.forbidden.iter().cloned().collect();
        f.sort();
        f
    }

    /// R_X: the largest ℓ∞ norm over the window.
    pub fn window_size(&self) -> i64 {
        self.window.iter().map(|w| norm_inf(w)).max().unwrap_or(0)
    }

    pub fn is_full_shift(&self) -> bool {
        self.forbidden.is_empty()
    }

    /// True iff the window-ordered values are not forbidden.
    #[inline]
    pub fn window_ok(&self, values: &[Symbol]) -> bool {
        self.forbidden.is_empty() || !self.forbidden.contains(values)
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.alphabet[s as usize]
    }

    pub fn symbol_index(&self, name: &str) -> Result<Symbol> {
        self.alphabet
            .iter()
            .position(|a| a == name)
            .map(|i| i as Symbol)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Track digits of a symbol, first track most significant.
    pub fn track_digits(&self, s: Symbol) -> Result<Vec<usize>> {
        let t = self.tracks.as_ref().ok_or(Error::NoTracks)?;
        Ok(digits_of(s as usize, t))
    }

    pub fn from_digits(&self, digits: &[usize]) -> Result<Symbol> {
        let t = self.tracks.as_ref().ok_or(Error::NoTracks)?;
        Ok(symbol_of(digits, t) as Symbol)
    }

    /// Parses the JSON document format.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpecDocument = serde_json::from_str(text).map_err(|e| Error::InvalidSpec(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &SpecDocument) -> Result<Self> {
        let alphabet: Vec<String> = doc.alphabet.iter().map(symbol_text).collect::<Result<_>>()?;
        let find = |name: &str| -> Result<Symbol> {
            alphabet.iter().position(|a| a == name).map(|i| i as Symbol).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
        };
        let zero = doc.zero.as_ref().map(|z| symbol_text(z).and_then(|n| find(&n))).transpose()?;
        let mut window = doc.window.clone();
        window.sort();
        window.dedup();
        let mut forbidden = Vec::new();
        for (i, f) in doc.forbidden.iter().enumerate() {
            let values = match &f.values {
                Value::Array(items) => {
                    if items.len() != window.len() {
                        return Err(Error::DomainMismatch { index: i, detail: format!("{} values for {} window cells", items.len(), window.len()) });
                    }
                    items.iter().map(|v| symbol_text(v).and_then(|n| find(&n))).collect::<Result<Vec<_>>>()?
                }
                Value::Object(map) => {
                    let mut cells = BTreeMap::new();
                    for (key, v) in map {
                        let p = parse_point(key).map_err(|e| Error::DomainMismatch { index: i, detail: e })?;
                        cells.insert(p, find(&symbol_text(v)?)?);
                    }
                    if cells.len() != window.len() || !cells.keys().zip(&window).all(|(a, b)| a == b) {
                        let keys: Vec<&Point> = cells.keys().collect();
                        return Err(Error::DomainMismatch { index: i, detail: format!("cells {keys:?} differ from the window {window:?}") });
                    }
                    cells.into_values().collect()
                }
                _ => return Err(Error::DomainMismatch { index: i, detail: "values must be an array or an object".into() }),
            };
            forbidden.push(values);
        }
        SftSpec::new(doc.dim, alphabet, zero, doc.tracks.clone(), window, forbidden)
    }

    pub fn to_document(&self) -> SpecDocument {
        let forbidden = self
            .forbidden()
            .into_iter()
            .map(|f| {
                let map = self
                    .window
                    .iter()
                    .zip(&f)
                    .map(|(p, &s)| (point_key(p), Value::String(self.alphabet[s as usize].clone())))
                    .collect();
                ForbiddenDoc { values: Value::Object(map) }
            })
            .collect();
        SpecDocument {
            dim: self.dim,
            alphabet: self.alphabet.iter().map(|a| Value::String(a.clone())).collect(),
            zero: self.zero.map(|z| Value::String(self.alphabet[z as usize].clone())),
            tracks: self.tracks.clone(),
            window: self.window.clone(),
            forbidden,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("spec serializes")
    }
}

/// Serialized form of an [`SftSpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub dim: usize,
    pub alphabet: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tracks: Option<Vec<usize>>,
    pub window: Vec<Point>,
    #[serde(default)]
    pub forbidden: Vec<ForbiddenDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForbiddenDoc {
    pub values: Value,
}

fn symbol_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::UnknownSymbol(other.to_string())),
    }
}

/// Cell keys in JSON objects: comma-separated coordinates.
pub fn point_key(p: &[i64]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_point(key: &str) -> std::result::Result<Point, String> {
    key.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad cell key {key:?}: {e}"))).collect()
}

pub(crate) fn digits_of(mut s: usize, sizes: &[usize]) -> Vec<usize> {
    let mut d = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        d[i] = s % sizes[i];
        s /= sizes[i];
    }
    d
}

pub(crate) fn symbol_of(digits: &[usize], sizes: &[usize]) -> usize {
    digits.iter().zip(sizes).fold(0, |acc, (d, k)| acc * k + d)
}

/// True iff no translate of the window inside the pattern's domain matches a forbidden pattern.
pub fn is_locally_admissible(spec: &SftSpec, x: &Pattern) -> bool {
    let mut buf = Vec::with_capacity(spec.window.len());
    'place: for t in x.cells().keys() {
        buf.clear();
        for w in &spec.window {
            let p = crate::lattice::add(t, w);
            match x.get(&p) {
                Some(s) => buf.push(s),
                None => continue 'place,
            }
        }
        if !spec.window_ok(&buf) {
            return false;
        }
    }
    true
}

/// Torus admissibility: every window placement, coordinates reduced mod the lattice.
pub fn is_periodic_admissible(spec: &SftSpec, x: &PeriodicConfig) -> bool {
    let fd = x.lattice().fundamental_domain();
    let mut buf = Vec::with_capacity(spec.window.len());
    for t in fd.points() {
        buf.clear();
        buf.extend(spec.window.iter().map(|w| x.get(&crate::lattice::add(t, w))));
        if !spec.window_ok(&buf) {
            return false;
        }
    }
    true
}

/// Checks a finite configuration as a point of X; on failure returns the
/// offending window placement.
pub fn finite_admissibility(spec: &SftSpec, x: &FiniteConfig) -> std::result::Result<(), Point> {
    let mut placements = std::collections::BTreeSet::new();
    for c in x.cells().keys() {
        for w in &spec.window {
            placements.insert(crate::lattice::sub(c, w));
        }
    }
    let mut buf = Vec::with_capacity(spec.window.len());
    for t in placements {
        buf.clear();
        buf.extend(spec.window.iter().map(|w| x.get(&crate::lattice::add(&t, w))));
        if !spec.window_ok(&buf) {
            return Err(t);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSubgroup;

    #[test]
    fn builtin_specs() {
        let f = SftSpec::full_shift(2, 1);
        assert_eq!(f.window_size(), 0);
        let g = SftSpec::golden_mean();
        assert_eq!(g.window_size(), 1);
        let h = SftSpec::triangular_hard_square();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.forbidden().len(), 16 - 6);
        let t = SftSpec::full_shift_tracks(&[2, 5], 1);
        assert_eq!(t.alphabet_size(), 10);
        assert_eq!(t.track_digits(7).unwrap(), vec![1, 2]);
        assert_eq!(t.from_digits(&[1, 2]).unwrap(), 7);
        assert_eq!(t.symbol_name(7), "1.2");
    }

    #[test]
    fn json_round_trip_and_errors() {
        let g = SftSpec::golden_mean();
        let again = SftSpec::from_json(&g.to_json()).unwrap();
        assert_eq!(again, g);
        let h = SftSpec::triangular_hard_square();
        assert_eq!(SftSpec::from_json(&h.to_json()).unwrap(), h);

        let text = r#"{"dim":1,"alphabet":["0","1"],"window":[[0],[1]],"forbidden":[{"values":{"0":"1","1":"1"}}]}"#;
        assert_eq!(SftSpec::from_json(text).unwrap().forbidden(), vec![vec![1, 1]]);
        let text = r#"{"dim":1,"alphabet":["0","1"],"window":[[0],[1]],"forbidden":[{"values":["1","1"]}]}"#;
        assert!(SftSpec::from_json(text).is_ok());

        let off = r#"{"dim":1,"alphabet":["0","1"],"window":[[0],[1]],"forbidden":[{"values":{"0":"1","2":"1"}}]}"#;
        assert!(matches!(SftSpec::from_json(off), Err(Error::DomainMismatch { index: 0, .. })));
        let no_origin = r#"{"dim":1,"alphabet":["0","1"],"window":[[1],[2]],"forbidden":[]}"#;
        assert_eq!(SftSpec::from_json(no_origin), Err(Error::OriginNotInWindow));
        let unknown = r#"{"dim":1,"alphabet":["0","1"],"window":[[0],[1]],"forbidden":[{"values":["1","2"]}]}"#;
        assert_eq!(SftSpec::from_json(unknown), Err(Error::UnknownSymbol("2".into())));
        let bad_zero = r#"{"dim":1,"alphabet":["0","1"],"zero":"1","window":[[0],[1]],"forbidden":[{"values":["1","1"]}]}"#;
        assert_eq!(SftSpec::from_json(bad_zero), Err(Error::NoZeroPoint));
    }

    #[test]
    fn admissibility_examples() {
        let g = SftSpec::golden_mean();
        let p = |s: &str| Pattern::from_word(0, s);
        assert!(is_locally_admissible(&g, &p("0101")));
        assert!(!is_locally_admissible(&g, &p("0110")));
        let ones = PeriodicConfig::new(LatticeSubgroup::scaled(1, 1), vec![1]);
        assert!(!is_periodic_admissible(&g, &ones));
        let alt = PeriodicConfig::new(LatticeSubgroup::scaled(1, 2), vec![0, 1]);
        assert!(is_periodic_admissible(&g, &alt));
        let x = FiniteConfig::from_cells(1, 0, vec![(vec![0], 1), (vec![1], 1)]);
        assert_eq!(finite_admissibility(&g, &x), Err(vec![0]));
    }
}
