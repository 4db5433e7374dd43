//! Group backends with exact equality via canonical normal forms.
//!
//! Every element is stored as its canonical word over the symmetric
//! generating set S, and for all supported backends the canonical word is
//! a geodesic: its length equals the word-metric distance from the
//! identity. Backends: free groups and free products of cyclic groups
//! (alternating syllable forms), free abelian groups (sorted exponent
//! vectors), and finite permutation groups (shortlex words from a
//! breadth-first table over the full group).

mod backend;
mod parse;

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GroupError;
use backend::Backend;

/// Index of a generator label inside a [`GeneratorSet`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GenId(pub u16);

/// Hard cap on finite-group enumeration at oracle construction.
pub const MAX_FINITE_GROUP: usize = 200_000;

const MAX_PERM_DEGREE: usize = 1024;
const MAX_WORD_FACTORS: usize = 26;
const MAX_PARSE_EXPONENT: i64 = 100_000;

fn letter(i: usize) -> String {
    ((b'a' + i as u8) as char).to_string()
}

/// The symmetric generating set S: ordered labels plus the involution
/// pairing each label with its inverse. Label order is fixed at load time
/// and drives every deterministic tie-break downstream.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    labels: Vec<String>,
    inverse: Vec<GenId>,
    /// Per label: (base generator name, exponent) — e.g. "b^2" is ("b", 2).
    parts: Vec<(String, i64)>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, g: GenId) -> &str {
        &self.labels[g.0 as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn inverse_of(&self, g: GenId) -> GenId {
        self.inverse[g.0 as usize]
    }

    pub fn parts(&self, g: GenId) -> (&str, i64) {
        let (b, e) = &self.parts[g.0 as usize];
        (b.as_str(), *e)
    }

    pub fn iter(&self) -> impl Iterator<Item = GenId> + '_ {
        (0..self.labels.len()).map(|i| GenId(i as u16))
    }

    pub fn by_label(&self, name: &str) -> Option<GenId> {
        self.labels
            .iter()
            .position(|l| l == name)
            .map(|i| GenId(i as u16))
    }
}

/// A group element in canonical normal form. Two elements are equal iff
/// their canonical words are equal; ordering is shortlex (length first,
/// then label order), the total order used for tie-breaking everywhere.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    word: Vec<GenId>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { word: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[GenId] {
        &self.word
    }

    pub(crate) fn from_word(word: Vec<GenId>) -> Self {
        GroupElement { word }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

/// Backend selector plus its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupKind {
    Free {
        rank: usize,
    },
    FreeAbelian {
        rank: usize,
    },
    /// Free product of cyclic groups; order 0 means an infinite-cyclic factor.
    FreeProductCyclic {
        orders: Vec<u32>,
    },
    FinitePermutation {
        degree: usize,
        generators: Vec<Vec<u16>>,
        names: Option<Vec<String>>,
    },
}

/// A loadable group description: backend kind plus an optional explicit
/// generating set (labels in the desired order).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub generating_set: Option<Vec<String>>,
}

impl GroupSpec {
    pub fn free(rank: usize) -> Self {
        GroupSpec {
            kind: GroupKind::Free { rank },
            generating_set: None,
        }
    }

    pub fn free_abelian(rank: usize) -> Self {
        GroupSpec {
            kind: GroupKind::FreeAbelian { rank },
            generating_set: None,
        }
    }

    pub fn free_product_cyclic(orders: &[u32]) -> Self {
        GroupSpec {
            kind: GroupKind::FreeProductCyclic {
                orders: orders.to_vec(),
            },
            generating_set: None,
        }
    }

    pub fn finite_permutation(degree: usize, generators: Vec<Vec<u16>>) -> Self {
        GroupSpec {
            kind: GroupKind::FinitePermutation {
                degree,
                generators,
                names: None,
            },
            generating_set: None,
        }
    }

    /// The infinite dihedral group Z/2 * Z/2 with S = {a, b}.
    pub fn infinite_dihedral() -> Self {
        GroupSpec::free_product_cyclic(&[2, 2])
    }

    /// S₃ generated by the adjacent transpositions (0 1) and (1 2);
    /// its Cayley graph is a hexagon.
    pub fn symmetric_3() -> Self {
        GroupSpec::finite_permutation(3, vec![vec![1, 0, 2], vec![0, 2, 1]])
    }

    pub fn from_json_str(s: &str) -> Result<Self, GroupError> {
        let value: serde_json::Value = serde_json::from_str(s)
            .map_err(|e| GroupError::spec("(document)", format!("not valid JSON: {e}")))?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self, GroupError> {
        let obj = value
            .as_object()
            .ok_or_else(|| GroupError::spec("(document)", "expected a JSON object"))?;
        for key in obj.keys() {
            if key != "kind" && key != "parameters" && key != "generating_set" {
                return Err(GroupError::spec(key, "unknown field"));
            }
        }
        let kind_str = obj
            .get("kind")
            .and_then(|v| v.as_str())
            .ok_or_else(|| GroupError::spec("kind", "missing or not a string"))?;
        let params = obj
            .get("parameters")
            .cloned()
            .unwrap_or(serde_json::Value::Null);
        let kind = match kind_str {
            "free" => GroupKind::Free {
                rank: param_usize(&params, "rank")?,
            },
            "free_abelian" => GroupKind::FreeAbelian {
                rank: param_usize(&params, "rank")?,
            },
            "free_product_cyclic" => {
                let arr = params
                    .get("orders")
                    .and_then(|v| v.as_array())
                    .ok_or_else(|| {
                        GroupError::spec("parameters.orders", "missing or not an array")
                    })?;
                let mut orders = Vec::with_capacity(arr.len());
                for (i, v) in arr.iter().enumerate() {
                    let n = v.as_u64().ok_or_else(|| {
                        GroupError::spec(
                            &format!("parameters.orders[{i}]"),
                            "not a non-negative integer",
                        )
                    })?;
                    orders.push(n as u32);
                }
                GroupKind::FreeProductCyclic { orders }
            }
            "finite_permutation" => {
                let degree = param_usize(&params, "degree")?;
                let arr = params
                    .get("generators")
                    .and_then(|v| v.as_array())
                    .ok_or_else(|| {
                        GroupError::spec("parameters.generators", "missing or not an array")
                    })?;
                let mut generators = Vec::with_capacity(arr.len());
                for (i, gv) in arr.iter().enumerate() {
                    let field = format!("parameters.generators[{i}]");
                    let images = gv
                        .as_array()
                        .ok_or_else(|| GroupError::spec(&field, "not an array"))?;
                    let mut perm = Vec::with_capacity(images.len());
                    for x in images {
                        let p = x.as_u64().ok_or_else(|| {
                            GroupError::spec(&field, "entries must be non-negative integers")
                        })?;
                        perm.push(p as u16);
                    }
                    generators.push(perm);
                }
                let names = match params.get("names") {
                    None | Some(serde_json::Value::Null) => None,
                    Some(serde_json::Value::Array(a)) => {
                        let mut names = Vec::with_capacity(a.len());
                        for (i, v) in a.iter().enumerate() {
                            let s = v.as_str().ok_or_else(|| {
                                GroupError::spec(
                                    &format!("parameters.names[{i}]"),
                                    "not a string",
                                )
                            })?;
                            names.push(s.to_string());
                        }
                        Some(names)
                    }
                    Some(_) => {
                        return Err(GroupError::spec("parameters.names", "not an array"));
                    }
                };
                GroupKind::FinitePermutation {
                    degree,
                    generators,
                    names,
                }
            }
            other => {
                return Err(GroupError::spec(
                    "kind",
                    format!(
                        "unknown kind `{other}` (expected free, free_abelian, \
                         free_product_cyclic, or finite_permutation)"
                    ),
                ));
            }
        };
        let generating_set = match obj.get("generating_set") {
            None | Some(serde_json::Value::Null) => None,
            Some(serde_json::Value::Array(a)) => {
                let mut set = Vec::with_capacity(a.len());
                for (i, v) in a.iter().enumerate() {
                    let s = v.as_str().ok_or_else(|| {
                        GroupError::spec(&format!("generating_set[{i}]"), "not a string")
                    })?;
                    set.push(s.to_string());
                }
                Some(set)
            }
            Some(_) => return Err(GroupError::spec("generating_set", "not an array")),
        };
        Ok(GroupSpec {
            kind,
            generating_set,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (kind, params) = match &self.kind {
            GroupKind::Free { rank } => ("free", serde_json::json!({ "rank": rank })),
            GroupKind::FreeAbelian { rank } => {
                ("free_abelian", serde_json::json!({ "rank": rank }))
            }
            GroupKind::FreeProductCyclic { orders } => {
                ("free_product_cyclic", serde_json::json!({ "orders": orders }))
            }
            GroupKind::FinitePermutation {
                degree,
                generators,
                names,
            } => {
                let mut p = serde_json::json!({ "degree": degree, "generators": generators });
                if let Some(names) = names {
                    p["names"] = serde_json::json!(names);
                }
                ("finite_permutation", p)
            }
        };
        let mut v = serde_json::json!({ "kind": kind, "parameters": params });
        if let Some(set) = &self.generating_set {
            v["generating_set"] = serde_json::json!(set);
        }
        v
    }
}

fn param_usize(params: &serde_json::Value, name: &str) -> Result<usize, GroupError> {
    params
        .get(name)
        .and_then(|v| v.as_u64())
        .map(|v| v as usize)
        .ok_or_else(|| {
            GroupError::spec(
                &format!("parameters.{name}"),
                "missing or not a non-negative integer",
            )
        })
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        GroupSpec::from_json_value(&value).map_err(D::Error::custom)
    }
}

/// Multiplication, inversion, and normal forms for one loaded group.
/// Immutable after construction; all operations are pure.
#[derive(Debug)]
pub struct GroupOracle {
    spec: GroupSpec,
    gens: GeneratorSet,
    backend: Backend,
    /// Base generator name (exponent-1 label) → its GenId.
    base_index: HashMap<String, GenId>,
}

impl GroupOracle {
    /// Validates the spec and builds the oracle. The resulting generating
    /// set is symmetric, excludes the identity, and has a fixed label
    /// order.
    pub fn load(spec: GroupSpec) -> Result<Self, GroupError> {
        let (gens, backend) = backend::build(&spec)?;
        let mut base_index = HashMap::new();
        for g in gens.iter() {
            let (base, exp) = gens.parts(g);
            if exp == 1 {
                base_index.insert(base.to_string(), g);
            }
        }
        Ok(GroupOracle {
            spec,
            gens,
            backend,
            base_index,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity()
    }

    /// The element of a single generator label.
    pub fn generator(&self, g: GenId) -> GroupElement {
        GroupElement::from_word(self.backend.normalize(&[g]))
    }

    /// Rejects words that are not in canonical normal form for this
    /// backend (or that reference unknown labels).
    pub fn validate(&self, a: &GroupElement) -> Result<(), GroupError> {
        for &g in a.word() {
            if g.0 as usize >= self.gens.len() {
                return Err(GroupError::InvalidElement {
                    reason: format!("generator index {} out of range", g.0),
                });
            }
        }
        let normal = self.backend.normalize(a.word());
        if normal != a.word {
            return Err(GroupError::InvalidElement {
                reason: "word is not in canonical normal form".to_string(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub fn invert(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.validate(a)?;
        Ok(self.inv_unchecked(a))
    }

    /// Least n ≤ guard with aⁿ = e, if any.
    pub fn order_of(&self, a: &GroupElement, guard: u64) -> Result<Option<u64>, GroupError> {
        self.validate(a)?;
        let mut acc = a.clone();
        let mut n = 1;
        loop {
            if acc.is_identity() {
                return Ok(Some(n));
            }
            if n >= guard {
                return Ok(None);
            }
            acc = self.mul_unchecked(&acc, a);
            n += 1;
        }
    }

    /// Canonical words are geodesic for every backend, so the word length
    /// of the normal form is the word-metric distance from the identity.
    pub fn word_length(&self, a: &GroupElement) -> u32 {
        a.len() as u32
    }

    pub(crate) fn mul_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut w = Vec::with_capacity(a.len() + b.len());
        w.extend_from_slice(a.word());
        w.extend_from_slice(b.word());
        GroupElement::from_word(self.backend.normalize(&w))
    }

    pub(crate) fn inv_unchecked(&self, a: &GroupElement) -> GroupElement {
        let w: Vec<GenId> = a
            .word()
            .iter()
            .rev()
            .map(|&g| self.gens.inverse_of(g))
            .collect();
        GroupElement::from_word(self.backend.normalize(&w))
    }

    pub(crate) fn mul_gen(&self, a: &GroupElement, g: GenId) -> GroupElement {
        let mut w = Vec::with_capacity(a.len() + 1);
        w.extend_from_slice(a.word());
        w.push(g);
        GroupElement::from_word(self.backend.normalize(&w))
    }

    /// x⁻¹y, the difference element whose length is d(x, y).
    pub(crate) fn difference(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.mul_unchecked(&self.inv_unchecked(x), y)
    }

    /// Parses a word such as `bab`, `ab^2a`, `a^-1 b`, or `e`. Tokens may
    /// be separated by whitespace or `*`; an uppercase letter is shorthand
    /// for the inverse of the lowercase generator.
    pub fn parse_word(&self, input: &str) -> Result<GroupElement, GroupError> {
        let atoms = parse::tokenize_with(input, &|name| self.base_index.contains_key(name))
            .map_err(|reason| GroupError::WordParse {
                word: input.to_string(),
                reason,
            })?;
        let mut acc = GroupElement::identity();
        for atom in atoms {
            let (base, exp) = self.resolve_atom(&atom, input)?;
            if exp.unsigned_abs() as i64 > MAX_PARSE_EXPONENT {
                return Err(GroupError::WordParse {
                    word: input.to_string(),
                    reason: format!("exponent {exp} exceeds the supported magnitude"),
                });
            }
            let step = if exp >= 0 {
                self.generator(base)
            } else {
                self.inv_unchecked(&self.generator(base))
            };
            for _ in 0..exp.unsigned_abs() {
                acc = self.mul_unchecked(&acc, &step);
            }
        }
        Ok(acc)
    }

    fn resolve_atom(
        &self,
        atom: &parse::Atom,
        input: &str,
    ) -> Result<(GenId, i64), GroupError> {
        if let Some(&g) = self.base_index.get(&atom.base) {
            return Ok((g, atom.exp));
        }
        // Uppercase single letter = inverse of the lowercase generator.
        if atom.base.len() == 1 {
            let c = atom.base.chars().next().unwrap();
            if c.is_ascii_uppercase() {
                let lower = c.to_ascii_lowercase().to_string();
                if let Some(&g) = self.base_index.get(&lower) {
                    return Ok((g, -atom.exp));
                }
            }
        }
        Err(GroupError::WordParse {
            word: input.to_string(),
            reason: format!("unknown generator `{}`", atom.base),
        })
    }

    /// Renders the canonical word, compressing runs into exponents:
    /// `a·a·a` → `a^3`, `a⁻¹·a⁻¹` → `a^-2`. The identity renders as `e`.
    pub fn render(&self, a: &GroupElement) -> String {
        parse::render(self, a)
    }

    pub(crate) fn single_char_bases(&self) -> bool {
        self.base_index.keys().all(|b| b.len() == 1)
    }
}
