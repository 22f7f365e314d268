//! Quivers, Cartan data, the derived quiver constructions (double, triple,
//! framed, graded), dimension vectors on `I` and `I×ℤ`, and the arrow-wise
//! Hall bilinear form.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A vertex of a (possibly derived) quiver. Framing vertices are tagged
/// copies `i'` of `i`; graded vertices carry a spectral index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Vertex {
    Plain(u32),
    Framing(u32),
    Graded(u32, i64),
    GradedFraming(u32, i64),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Plain(i) => write!(f, "{i}"),
            Vertex::Framing(i) => write!(f, "{i}'"),
            Vertex::Graded(i, k) => write!(f, "({i},{k})"),
            Vertex::GradedFraming(i, k) => write!(f, "({i}',{k})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Arrow {
    pub src: Vertex,
    pub tgt: Vertex,
    pub label: String,
}

/// A finite quiver with symmetric Cartan matrix on its plain vertex set and
/// an orientation encoded by the arrow list.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QuiverData {
    /// Type tag: `A1`, `A2`, ..., `D4`, `jordan`, or `custom`.
    #[serde(rename = "type")]
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub arrows: Vec<Arrow>,
    /// Symmetric Cartan matrix indexed by the plain vertices `1..=rank`.
    pub cartan: Vec<Vec<i64>>,
}

impl QuiverData {
    /// Type `A_n` with arrows `i+1 -> i`.
    pub fn type_a(n: u32) -> QuiverData {
        let rank = n as usize;
        let mut cartan = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            cartan[i][i] = 2;
            if i + 1 < rank {
                cartan[i][i + 1] = -1;
                cartan[i + 1][i] = -1;
            }
        }
        let vertices = (1..=n).map(Vertex::Plain).collect();
        let arrows = (1..n)
            .map(|i| Arrow {
                src: Vertex::Plain(i + 1),
                tgt: Vertex::Plain(i),
                label: format!("a{i}"),
            })
            .collect();
        QuiverData {
            name: format!("A{n}"),
            vertices,
            arrows,
            cartan,
        }
    }

    /// Type `D_4`: center vertex 4, arrows from the leaves into the center.
    pub fn type_d4() -> QuiverData {
        let mut cartan = vec![vec![0i64; 4]; 4];
        for (i, row) in cartan.iter_mut().enumerate() {
            row[i] = 2;
            if i < 3 {
                row[3] = -1;
            }
        }
        for j in 0..3 {
            cartan[3][j] = -1;
        }
        QuiverData {
            name: "D4".into(),
            vertices: (1..=4).map(Vertex::Plain).collect(),
            arrows: (1..=3)
                .map(|i| Arrow {
                    src: Vertex::Plain(i),
                    tgt: Vertex::Plain(4),
                    label: format!("a{i}"),
                })
                .collect(),
            cartan,
        }
    }

    /// The Jordan quiver: one vertex, one loop.
    pub fn jordan() -> QuiverData {
        QuiverData {
            name: "jordan".into(),
            vertices: vec![Vertex::Plain(1)],
            arrows: vec![Arrow {
                src: Vertex::Plain(1),
                tgt: Vertex::Plain(1),
                label: "a1".into(),
            }],
            cartan: vec![vec![0]],
        }
    }

    /// Looks up a built-in type, or, when given a path to a quiver
    /// description file (JSON with keys `type`, `vertices`, `arrows`,
    /// `cartan`), loads a custom quiver from it.
    pub fn by_name(name: &str) -> Result<QuiverData> {
        match name {
            "A1" | "a1" => Ok(QuiverData::type_a(1)),
            "A2" | "a2" => Ok(QuiverData::type_a(2)),
            "A3" | "a3" => Ok(QuiverData::type_a(3)),
            "A4" | "a4" => Ok(QuiverData::type_a(4)),
            "D4" | "d4" => Ok(QuiverData::type_d4()),
            "jordan" | "Jordan" => Ok(QuiverData::jordan()),
            other => {
                let path = std::path::Path::new(other);
                if path.is_file() {
                    let text = std::fs::read_to_string(path).map_err(|e| {
                        Error::InvalidParameter(format!("cannot read quiver file {other}: {e}"))
                    })?;
                    let q: QuiverData = serde_json::from_str(&text)?;
                    q.validate()?;
                    Ok(q)
                } else {
                    Err(Error::UnsupportedQuiver(other.into()))
                }
            }
        }
    }

    /// Structural checks for externally supplied quivers: a square symmetric
    /// Cartan matrix with 2 on the diagonal, negative entries exactly on
    /// arrow-connected pairs, and arrows between declared vertices.
    pub fn validate(&self) -> Result<()> {
        let n = self.cartan.len();
        for (i, row) in self.cartan.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter("cartan matrix is not square".into()));
            }
            if row[i] != 2 {
                return Err(Error::InvalidParameter(format!(
                    "cartan diagonal entry at {} is {}, expected 2",
                    i + 1,
                    row[i]
                )));
            }
            for (j, &c) in row.iter().enumerate() {
                if self.cartan[j][i] != c {
                    return Err(Error::InvalidParameter("cartan matrix is not symmetric".into()));
                }
                if i != j && c < 0 {
                    let connected = self.arrows.iter().any(|a| {
                        matches!(
                            (a.src, a.tgt),
                            (Vertex::Plain(s), Vertex::Plain(t))
                                if (s == i as u32 + 1 && t == j as u32 + 1)
                                    || (s == j as u32 + 1 && t == i as u32 + 1)
                        )
                    });
                    if !connected {
                        return Err(Error::InvalidParameter(format!(
                            "cartan entry ({},{}) is negative but no arrow connects the vertices",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        for a in &self.arrows {
            if !self.vertices.contains(&a.src) || !self.vertices.contains(&a.tgt) {
                return Err(Error::InvalidParameter(format!(
                    "arrow {} uses undeclared vertices",
                    a.label
                )));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan_entry(&self, i: u32, j: u32) -> i64 {
        self.cartan[(i - 1) as usize][(j - 1) as usize]
    }

    /// Plain vertex indices `1..=rank`.
    pub fn plain_vertices(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=self.rank() as u32).filter(move |&i| self.vertices.contains(&Vertex::Plain(i)))
    }

    /// Neighbours `j` of `i` with `c_ij < 0`.
    pub fn neighbours(&self, i: u32) -> Vec<u32> {
        (1..=self.rank() as u32)
            .filter(|&j| j != i && self.cartan_entry(i, j) < 0)
            .collect()
    }
}

/// The derived quiver constructions.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeriveKind {
    Double,
    Triple,
    Framed,
    FramedDouble,
    FramedTriple,
    SimplyFramedTriple,
    Graded,
}

impl std::str::FromStr for DeriveKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "double" => DeriveKind::Double,
            "triple" => DeriveKind::Triple,
            "framed" => DeriveKind::Framed,
            "framed_double" => DeriveKind::FramedDouble,
            "framed_triple" => DeriveKind::FramedTriple,
            "simply_framed_triple" => DeriveKind::SimplyFramedTriple,
            "graded" => DeriveKind::Graded,
            other => return Err(Error::UnknownKind(other.into())),
        })
    }
}

fn star(label: &str) -> String {
    format!("{label}*")
}

fn doubled(arrows: &[Arrow]) -> Vec<Arrow> {
    let mut out = arrows.to_vec();
    out.extend(arrows.iter().map(|a| Arrow {
        src: a.tgt,
        tgt: a.src,
        label: star(&a.label),
    }));
    out
}

fn framing_vertex(v: Vertex) -> Vertex {
    match v {
        Vertex::Plain(i) => Vertex::Framing(i),
        Vertex::Graded(i, k) => Vertex::GradedFraming(i, k),
        v => v,
    }
}

fn framed(q: &QuiverData) -> QuiverData {
    let mut vertices = q.vertices.clone();
    vertices.extend(q.vertices.iter().map(|&v| framing_vertex(v)));
    let mut arrows = q.arrows.clone();
    for &v in &q.vertices {
        let i = match v {
            Vertex::Plain(i) => i,
            _ => continue,
        };
        arrows.push(Arrow {
            src: v,
            tgt: framing_vertex(v),
            label: format!("f{i}"),
        });
    }
    QuiverData {
        name: format!("{}_framed", q.name),
        vertices,
        arrows,
        cartan: q.cartan.clone(),
    }
}

fn with_loops(q: &QuiverData, loop_vertices: &[Vertex]) -> QuiverData {
    let mut arrows = q.arrows.clone();
    for &v in loop_vertices {
        let i = match v {
            Vertex::Plain(i) => i,
            _ => continue,
        };
        arrows.push(Arrow {
            src: v,
            tgt: v,
            label: format!("e{i}"),
        });
    }
    QuiverData {
        arrows,
        ..q.clone()
    }
}

/// The default degree map: arrows and framing arrows get degree `-1`, loops
/// get degree `+2`.
pub fn default_degree(label: &str) -> i64 {
    if label.starts_with('e') {
        2
    } else {
        -1
    }
}

/// Derives a new quiver from `q`.
///
/// For `Graded`, a degree per arrow label may be supplied (defaulting to
/// [`default_degree`]) and a finite window `[k_min, k_max]` must be given;
/// the graded vertex set `I×ℤ` is materialized on that window and arrows
/// leaving it are dropped.
pub fn derive_quiver(
    q: &QuiverData,
    kind: DeriveKind,
    degree_map: Option<&BTreeMap<String, i64>>,
    window: Option<(i64, i64)>,
) -> Result<QuiverData> {
    match kind {
        DeriveKind::Double => Ok(QuiverData {
            name: format!("{}_double", q.name),
            arrows: doubled(&q.arrows),
            ..q.clone()
        }),
        DeriveKind::Triple => {
            let d = QuiverData {
                arrows: doubled(&q.arrows),
                ..q.clone()
            };
            let mut t = with_loops(&d, &q.vertices);
            t.name = format!("{}_triple", q.name);
            Ok(t)
        }
        DeriveKind::Framed => Ok(framed(q)),
        DeriveKind::FramedDouble => {
            let f = framed(q);
            Ok(QuiverData {
                name: format!("{}_framed_double", q.name),
                arrows: doubled(&f.arrows),
                ..f
            })
        }
        DeriveKind::FramedTriple => {
            let f = framed(q);
            let fd = QuiverData {
                arrows: doubled(&f.arrows),
                ..f
            };
            let mut t = with_loops(&fd, &q.vertices);
            t.name = format!("{}_framed_triple", q.name);
            Ok(t)
        }
        DeriveKind::SimplyFramedTriple => {
            let t = derive_quiver(q, DeriveKind::Triple, None, None)?;
            let mut f = framed(&t);
            f.name = format!("{}_simply_framed_triple", q.name);
            Ok(f)
        }
        DeriveKind::Graded => {
            let (k_min, k_max) = window.ok_or(Error::MissingWindow)?;
            let mut vertices = Vec::new();
            for k in k_min..=k_max {
                for &v in &q.vertices {
                    vertices.push(match v {
                        Vertex::Plain(i) => Vertex::Graded(i, k),
                        Vertex::Framing(i) => Vertex::GradedFraming(i, k),
                        v => v,
                    });
                }
            }
            vertices.sort();
            let mut arrows = Vec::new();
            for k in k_min..=k_max {
                for a in &q.arrows {
                    let deg = match degree_map {
                        Some(m) => *m
                            .get(&a.label)
                            .ok_or_else(|| Error::MissingDegree(a.label.clone()))?,
                        None => default_degree(&a.label),
                    };
                    let k2 = deg + k;
                    if k2 < k_min || k2 > k_max {
                        continue;
                    }
                    let lift = |v: Vertex, kk: i64| match v {
                        Vertex::Plain(i) => Vertex::Graded(i, kk),
                        Vertex::Framing(i) => Vertex::GradedFraming(i, kk),
                        v => v,
                    };
                    arrows.push(Arrow {
                        src: lift(a.src, k),
                        tgt: lift(a.tgt, k2),
                        label: format!("({},{})", a.label, k),
                    });
                }
            }
            Ok(QuiverData {
                name: format!("{}_graded", q.name),
                vertices,
                arrows,
                cartan: q.cartan.clone(),
            })
        }
    }
}

// --- dimension vectors ------------------------------------------------------

/// Support of a dimension vector: the plain vertex set `I` or the graded set
/// `I×ℤ`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    Vertices,
    GradedVertices,
}

/// Key of a dimension-vector entry.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum DimKey {
    Plain(u32),
    Graded(u32, i64),
}

impl fmt::Display for DimKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimKey::Plain(i) => write!(f, "{i}"),
            DimKey::Graded(i, k) => write!(f, "{i},{k}"),
        }
    }
}

/// An integer-valued dimension vector on `I` or `I×ℤ`, sparsely stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct DimVec {
    pub support: Support,
    vals: BTreeMap<DimKey, i64>,
}

impl DimVec {
    pub fn zero(support: Support) -> DimVec {
        DimVec {
            support,
            vals: BTreeMap::new(),
        }
    }

    pub fn delta(i: u32) -> DimVec {
        let mut v = DimVec::zero(Support::Vertices);
        v.set(DimKey::Plain(i), 1);
        v
    }

    pub fn delta_graded(i: u32, k: i64) -> DimVec {
        let mut v = DimVec::zero(Support::GradedVertices);
        v.set(DimKey::Graded(i, k), 1);
        v
    }

    pub fn set(&mut self, key: DimKey, value: i64) {
        match (self.support, key) {
            (Support::Vertices, DimKey::Plain(_)) | (Support::GradedVertices, DimKey::Graded(..)) => {}
            _ => panic!("dimension-vector key does not match its support"),
        }
        if value == 0 {
            self.vals.remove(&key);
        } else {
            self.vals.insert(key, value);
        }
    }

    pub fn get(&self, key: DimKey) -> i64 {
        self.vals.get(&key).copied().unwrap_or(0)
    }

    pub fn add_assign(&mut self, key: DimKey, value: i64) {
        let v = self.get(key) + value;
        self.set(key, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (DimKey, i64)> + '_ {
        self.vals.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.vals.values().sum()
    }

    pub fn add(&self, other: &DimVec) -> Result<DimVec> {
        self.check_support(other)?;
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.add_assign(k, v);
        }
        Ok(out)
    }

    pub fn scaled(&self, c: i64) -> DimVec {
        let mut out = DimVec::zero(self.support);
        for (k, v) in self.iter() {
            out.set(k, v * c);
        }
        out
    }

    /// Componentwise partial order `self <= other`.
    pub fn leq(&self, other: &DimVec) -> Result<bool> {
        self.check_support(other)?;
        let keys: std::collections::BTreeSet<DimKey> =
            self.vals.keys().chain(other.vals.keys()).copied().collect();
        Ok(keys.into_iter().all(|k| self.get(k) <= other.get(k)))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.vals.values().all(|&v| v >= 0)
    }

    fn check_support(&self, other: &DimVec) -> Result<()> {
        if self.support != other.support {
            return Err(Error::SupportMismatch(format!(
                "{:?} vs {:?}",
                self.support, other.support
            )));
        }
        Ok(())
    }

    /// Serialization as a string-keyed map `{"i": n}` / `{"i,k": n}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, v) in self.iter() {
            map.insert(k.to_string(), serde_json::Value::from(v));
        }
        serde_json::Value::Object(map)
    }

    pub fn from_json(support: Support, value: &serde_json::Value) -> Result<DimVec> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidParameter("dimension vector must be an object".into()))?;
        let mut out = DimVec::zero(support);
        for (key, val) in obj {
            let n = val
                .as_i64()
                .ok_or_else(|| Error::InvalidParameter(format!("non-integer entry at {key}")))?;
            let dk = parse_dim_key(support, key)?;
            out.add_assign(dk, n);
        }
        Ok(out)
    }
}

pub fn parse_dim_key(support: Support, key: &str) -> Result<DimKey> {
    let parts: Vec<&str> = key.split(',').collect();
    match (support, parts.as_slice()) {
        (Support::Vertices, [i]) => Ok(DimKey::Plain(i.trim().parse().map_err(|_| {
            Error::InvalidParameter(format!("bad vertex `{key}`"))
        })?)),
        (Support::GradedVertices, [i, k]) => Ok(DimKey::Graded(
            i.trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad vertex `{key}`")))?,
            k.trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad spectral index `{key}`")))?,
        )),
        _ => Err(Error::InvalidParameter(format!(
            "key `{key}` does not match support {support:?}"
        ))),
    }
}

/// `w - 𝐜v`. Ungraded: `(w - 𝐜v)_i = w_i - Σ_j c_ij v_j`. Graded:
/// `(w - 𝐜v)_{i,k} = w_{i,k} - v_{i,k+1} - v_{i,k-1} - Σ_{j≠i} c_ij v_{j,k}`.
pub fn cartan_apply(q: &QuiverData, v: &DimVec, w: &DimVec) -> Result<DimVec> {
    if v.support != w.support {
        return Err(Error::SupportMismatch(format!(
            "{:?} vs {:?}",
            v.support, w.support
        )));
    }
    let rank = q.rank() as u32;
    match v.support {
        Support::Vertices => {
            let mut out = w.clone();
            for (k, val) in v.iter() {
                let j = match k {
                    DimKey::Plain(j) => j,
                    _ => unreachable!(),
                };
                for i in 1..=rank {
                    let c = q.cartan_entry(i, j);
                    if c != 0 {
                        out.add_assign(DimKey::Plain(i), -c * val);
                    }
                }
            }
            Ok(out)
        }
        Support::GradedVertices => {
            let mut out = w.clone();
            for (key, val) in v.iter() {
                let (j, k) = match key {
                    DimKey::Graded(j, k) => (j, k),
                    _ => unreachable!(),
                };
                out.add_assign(DimKey::Graded(j, k + 1), -val);
                out.add_assign(DimKey::Graded(j, k - 1), -val);
                for i in 1..=rank {
                    if i != j {
                        let c = q.cartan_entry(i, j);
                        if c != 0 {
                            out.add_assign(DimKey::Graded(i, k), -c * val);
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

/// `(v, w)` is (ℓ-)dominant when `w - 𝐜v` has only non-negative entries.
pub fn is_dominant(q: &QuiverData, v: &DimVec, w: &DimVec) -> Result<bool> {
    Ok(cartan_apply(q, v, w)?.is_nonnegative())
}

/// The arrow-wise Hall form `(v1 | v2) = Σ_{α: i→j} v1_i · v2_j` over the
/// arrows of the base quiver. The multiplication sign twist is
/// `(-1)^{(v1|v2)}`.
pub fn hall_pairing(q: &QuiverData, v1: &DimVec, v2: &DimVec) -> Result<i64> {
    if v1.support != Support::Vertices || v2.support != Support::Vertices {
        return Err(Error::GradedHallPairing);
    }
    let mut acc = 0i64;
    for a in &q.arrows {
        if let (Vertex::Plain(i), Vertex::Plain(j)) = (a.src, a.tgt) {
            acc += v1.get(DimKey::Plain(i)) * v2.get(DimKey::Plain(j));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_triple_is_one_loop() {
        let q = QuiverData::type_a(1);
        let t = derive_quiver(&q, DeriveKind::Triple, None, None).unwrap();
        assert_eq!(t.vertices.len(), 1);
        assert_eq!(t.arrows.len(), 1);
        assert_eq!(t.arrows[0].src, t.arrows[0].tgt);
    }

    #[test]
    fn arrow_counts() {
        let q = QuiverData::type_a(2);
        assert_eq!(
            derive_quiver(&q, DeriveKind::Double, None, None).unwrap().arrows.len(),
            2
        );
        assert_eq!(
            derive_quiver(&q, DeriveKind::Triple, None, None).unwrap().arrows.len(),
            4
        );
        assert_eq!(
            derive_quiver(&q, DeriveKind::Framed, None, None).unwrap().arrows.len(),
            3
        );
        // a, a*, f1, f1*, f2, f2*, e1, e2
        assert_eq!(
            derive_quiver(&q, DeriveKind::FramedTriple, None, None).unwrap().arrows.len(),
            8
        );
        // triple (4 arrows incl. 2 loops) + framing arrows (2)
        assert_eq!(
            derive_quiver(&q, DeriveKind::SimplyFramedTriple, None, None)
                .unwrap()
                .arrows
                .len(),
            6
        );
    }

    #[test]
    fn graded_arrows_follow_degrees() {
        let q = QuiverData::type_a(1);
        let t = derive_quiver(&q, DeriveKind::FramedTriple, None, None).unwrap();
        let g = derive_quiver(&t, DeriveKind::Graded, None, Some((-2, 2))).unwrap();
        // Loops have degree +2: (e1,k) goes (1,k) -> (1,k+2).
        let eps = g.arrows.iter().find(|a| a.label == "(e1,0)").unwrap();
        assert_eq!(eps.src, Vertex::Graded(1, 0));
        assert_eq!(eps.tgt, Vertex::Graded(1, 2));
        // Framing arrows have degree -1.
        let f = g.arrows.iter().find(|a| a.label == "(f1,0)").unwrap();
        assert_eq!(f.tgt, Vertex::GradedFraming(1, -1));
    }

    #[test]
    fn cartan_apply_examples() {
        // v = 0: identity.
        let q = QuiverData::type_a(2);
        let w = DimVec::delta(1);
        let out = cartan_apply(&q, &DimVec::zero(Support::Vertices), &w).unwrap();
        assert_eq!(out, w);
        // A2 ungraded, w = d1, v = d1: (-1, 1).
        let out = cartan_apply(&q, &DimVec::delta(1), &w).unwrap();
        assert_eq!(out.get(DimKey::Plain(1)), -1);
        assert_eq!(out.get(DimKey::Plain(2)), 1);
        // A1 graded, w = d_{1,1}, v = d_{1,0}.
        let a1 = QuiverData::type_a(1);
        let out = cartan_apply(&a1, &DimVec::delta_graded(1, 0), &DimVec::delta_graded(1, 1))
            .unwrap();
        assert_eq!(out.get(DimKey::Graded(1, 1)), 0);
        assert_eq!(out.get(DimKey::Graded(1, -1)), -1);
        assert!(!out.is_nonnegative());
    }

    #[test]
    fn hall_examples() {
        let q = QuiverData::type_a(2);
        let zero = DimVec::zero(Support::Vertices);
        let both = DimVec::delta(1).add(&DimVec::delta(2)).unwrap();
        assert_eq!(hall_pairing(&q, &zero, &both).unwrap(), 0);
        // Single arrow 2 -> 1 contributes v1_2 * v2_1 = 1.
        assert_eq!(hall_pairing(&q, &both, &both).unwrap(), 1);
        // Jordan quiver: loop at 1.
        let j = QuiverData::jordan();
        let v1 = DimVec::delta(1).scaled(2);
        let v2 = DimVec::delta(1).scaled(3);
        assert_eq!(hall_pairing(&j, &v1, &v2).unwrap(), 6);
    }

    #[test]
    fn cartan_positive_definite_small_rank() {
        for q in [
            QuiverData::type_a(1),
            QuiverData::type_a(2),
            QuiverData::type_a(3),
            QuiverData::type_a(4),
            QuiverData::type_d4(),
        ] {
            let n = q.rank();
            // Leading principal minors must all be positive.
            for k in 1..=n {
                let minor: Vec<Vec<i64>> = (0..k)
                    .map(|i| (0..k).map(|j| q.cartan[i][j]).collect())
                    .collect();
                assert!(det_int(&minor) > 0, "{} minor {k}", q.name);
            }
        }
    }

    fn det_int(m: &[Vec<i64>]) -> i64 {
        // Cofactor expansion; the matrices here are at most 4x4.
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut acc = 0i64;
        for j in 0..n {
            let sub: Vec<Vec<i64>> = (1..n)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            acc += sign * m[0][j] * det_int(&sub);
        }
        acc
    }

    #[test]
    fn derive_is_deterministic() {
        let q = QuiverData::type_a(3);
        for kind in [
            DeriveKind::Double,
            DeriveKind::Triple,
            DeriveKind::FramedTriple,
            DeriveKind::SimplyFramedTriple,
        ] {
            let a = derive_quiver(&q, kind, None, None).unwrap();
            let b = derive_quiver(&q, kind, None, None).unwrap();
            let labels: Vec<&str> = a.arrows.iter().map(|x| x.label.as_str()).collect();
            let labels2: Vec<&str> = b.arrows.iter().map(|x| x.label.as_str()).collect();
            assert_eq!(labels, labels2);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn componentwise_partial_order() {
        let small = DimVec::delta(1);
        let big = DimVec::delta(1).add(&DimVec::delta(2)).unwrap();
        assert!(small.leq(&big).unwrap());
        assert!(!big.leq(&small).unwrap());
        assert!(small.leq(&small).unwrap());
        assert!(DimVec::zero(Support::Vertices).leq(&small).unwrap());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let q = derive_quiver(&QuiverData::type_a(2), DeriveKind::FramedTriple, None, None)
            .unwrap();
        let s1 = serde_json::to_string(&q).unwrap();
        let q2: QuiverData = serde_json::from_str(&s1).unwrap();
        let s2 = serde_json::to_string(&q2).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(q, q2);

        let mut v = DimVec::zero(Support::GradedVertices);
        v.set(DimKey::Graded(1, -2), 3);
        v.set(DimKey::Graded(2, 1), 1);
        let j1 = v.to_json().to_string();
        let v2 = DimVec::from_json(Support::GradedVertices, &serde_json::from_str(&j1).unwrap())
            .unwrap();
        assert_eq!(v, v2);
        assert_eq!(v2.to_json().to_string(), j1);
    }
}
