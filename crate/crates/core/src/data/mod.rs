//! Domain types and dataset schemas: embedded foods, survey interactions,
//! per-user history/candidate contexts, and relevance labels.

mod context;
mod load;

pub use context::{build_user_context, region_contexts, relevance_labels};
pub use load::{
    load_embeddings, load_extended, load_interactions, save_embeddings_csv, save_embeddings_jsonl,
    save_extended, save_interactions,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::DataError;

/// Opaque food key, unique within one table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FoodId(pub String);

impl FoodId {
    pub fn new(id: impl Into<String>) -> Self {
        FoodId(id.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FoodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Opaque worker key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WorkerId(pub String);

impl WorkerId {
    pub fn new(id: impl Into<String>) -> Self {
        WorkerId(id.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for WorkerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Food origin region. `Other` keeps the taxonomy open for fixtures beyond
/// the three travel destinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Region {
    Japan,
    SoutheastAsia,
    China,
    Europe,
    Other,
}

impl Region {
    pub const ALL: [Region; 5] = [
        Region::Japan,
        Region::SoutheastAsia,
        Region::China,
        Region::Europe,
        Region::Other,
    ];

    /// Canonical name as written in data files.
    pub fn name(self) -> &'static str {
        match self {
            Region::Japan => "Japan",
            Region::SoutheastAsia => "SoutheastAsia",
            Region::China => "China",
            Region::Europe => "Europe",
            Region::Other => "Other",
        }
    }

    /// Lowercase identifier used in output file names and CLI flags.
    pub fn slug(self) -> &'static str {
        match self {
            Region::Japan => "japan",
            Region::SoutheastAsia => "southeast_asia",
            Region::China => "china",
            Region::Europe => "europe",
            Region::Other => "other",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Region {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| *c != '_' && *c != '-' && !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "japan" => Ok(Region::Japan),
            "southeastasia" => Ok(Region::SoutheastAsia),
            "china" => Ok(Region::China),
            "europe" => Ok(Region::Europe),
            "other" => Ok(Region::Other),
            _ => Err(format!("unknown region '{s}'")),
        }
    }
}

/// A food with its taste and ingredient representation vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedFood {
    pub food_id: FoodId,
    pub name: String,
    pub region: Region,
    pub taste_vec: Vec<f64>,
    pub ingredient_vec: Vec<f64>,
}

/// Validated table of embedded foods with consistent vector dimensions.
#[derive(Debug, Clone)]
pub struct FoodTable {
    foods: BTreeMap<FoodId, EmbeddedFood>,
    taste_dim: usize,
    ingredient_dim: usize,
}

impl FoodTable {
    /// Builds a table, enforcing unique ids, consistent dimensions, and
    /// finite entries. Row numbers in errors refer to the input order.
    pub fn from_rows(rows: Vec<EmbeddedFood>, path: &str) -> Result<Self, DataError> {
        let mut foods = BTreeMap::new();
        let mut taste_dim = None;
        let mut ingredient_dim = None;
        for (i, food) in rows.into_iter().enumerate() {
            let row = i + 2; // 1-based plus header line
            let td = *taste_dim.get_or_insert(food.taste_vec.len());
            if food.taste_vec.len() != td {
                return Err(DataError::DimensionMismatch {
                    path: path.to_string(),
                    row,
                    food_id: food.food_id.0.clone(),
                    kind: "taste",
                    expected: td,
                    found: food.taste_vec.len(),
                });
            }
            let id = *ingredient_dim.get_or_insert(food.ingredient_vec.len());
            if food.ingredient_vec.len() != id {
                return Err(DataError::DimensionMismatch {
                    path: path.to_string(),
                    row,
                    food_id: food.food_id.0.clone(),
                    kind: "ingredient",
                    expected: id,
                    found: food.ingredient_vec.len(),
                });
            }
            for (kind, vec) in [("taste", &food.taste_vec), ("ingredient", &food.ingredient_vec)] {
                if vec.iter().any(|v| !v.is_finite()) {
                    return Err(DataError::NonFiniteValue {
                        path: path.to_string(),
                        row,
                        food_id: food.food_id.0.clone(),
                        kind,
                    });
                }
            }
            if foods.contains_key(&food.food_id) {
                return Err(DataError::DuplicateFoodId {
                    path: path.to_string(),
                    row,
                    food_id: food.food_id.0.clone(),
                });
            }
            foods.insert(food.food_id.clone(), food);
        }
        Ok(FoodTable {
            foods,
            taste_dim: taste_dim.unwrap_or(0),
            ingredient_dim: ingredient_dim.unwrap_or(0),
        })
    }

    pub fn get(&self, id: &FoodId) -> Option<&EmbeddedFood> {
        self.foods.get(id)
    }

    pub fn contains(&self, id: &FoodId) -> bool {
        self.foods.contains_key(id)
    }

    /// Foods in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = &EmbeddedFood> {
        self.foods.values()
    }

    pub fn len(&self) -> usize {
        self.foods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.foods.is_empty()
    }

    pub fn taste_dim(&self) -> usize {
        self.taste_dim
    }

    pub fn ingredient_dim(&self) -> usize {
        self.ingredient_dim
    }

    /// Foods of one region, in ascending id order.
    pub fn of_region(&self, region: Region) -> Vec<&EmbeddedFood> {
        self.foods.values().filter(|f| f.region == region).collect()
    }

    /// Regions present in the table, sorted.
    pub fn regions(&self) -> Vec<Region> {
        let mut seen: Vec<Region> = Vec::new();
        for r in Region::ALL {
            if self.foods.values().any(|f| f.region == r) {
                seen.push(r);
            }
        }
        seen
    }
}

/// One answer to the "suits / would like to try" survey questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TasteEval {
    pub suits: bool,
    pub want_to_try: bool,
}

impl TasteEval {
    /// Decodes option codes 1-4: 1 = suits + want, 2 = suits only,
    /// 3 = want only, 4 = neither.
    pub fn from_option_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(TasteEval { suits: true, want_to_try: true }),
            2 => Some(TasteEval { suits: true, want_to_try: false }),
            3 => Some(TasteEval { suits: false, want_to_try: true }),
            4 => Some(TasteEval { suits: false, want_to_try: false }),
            _ => None,
        }
    }

    pub fn option_code(self) -> u8 {
        match (self.suits, self.want_to_try) {
            (true, true) => 1,
            (true, false) => 2,
            (false, true) => 3,
            (false, false) => 4,
        }
    }
}

/// One worker-food survey record from the main food set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionRecord {
    pub worker_id: WorkerId,
    pub food_id: FoodId,
    pub eaten: bool,
    pub taste_eval: TasteEval,
    pub ingredient_eval: TasteEval,
}

/// One worker-food record from the free-text daily-food set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedInteractionRecord {
    pub worker_id: WorkerId,
    pub food_id: FoodId,
}

/// A worker's scoring context for one candidate region: history set H and
/// candidate set F. Immutable once built.
#[derive(Debug, Clone)]
pub struct UserContext {
    pub worker_id: WorkerId,
    pub region: Region,
    /// Eaten foods plus all daily foods, keyed by id.
    pub history: BTreeMap<FoodId, EmbeddedFood>,
    /// Region foods the worker has not eaten, keyed by id.
    pub candidates: BTreeMap<FoodId, EmbeddedFood>,
}

impl UserContext {
    pub fn history_len(&self) -> usize {
        self.history.len()
    }

    pub fn candidate_len(&self) -> usize {
        self.candidates.len()
    }
}

/// Which (comfort, curiosity) predicate pair defines a relevant item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Experiment {
    /// Comfort from taste, curiosity from ingredients.
    Exp1,
    /// Curiosity from taste, comfort from ingredients.
    Exp2,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Exp1 => "exp1",
            Experiment::Exp2 => "exp2",
        }
    }

    /// Relevant-item predicate over the two survey answers.
    pub fn is_relevant(self, taste: TasteEval, ingredient: TasteEval) -> bool {
        match self {
            Experiment::Exp1 => taste.suits && ingredient.want_to_try,
            Experiment::Exp2 => taste.want_to_try && ingredient.suits,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exp1" | "1" => Ok(Experiment::Exp1),
            "exp2" | "2" => Ok(Experiment::Exp2),
            _ => Err(format!("unknown experiment '{s}', expected exp1 or exp2")),
        }
    }
}

/// Relevance labels for every candidate of one context under one experiment.
#[derive(Debug, Clone)]
pub struct RelevanceLabels {
    pub experiment: Experiment,
    pub labels: BTreeMap<FoodId, bool>,
}

impl RelevanceLabels {
    pub fn relevant_count(&self) -> usize {
        self.labels.values().filter(|v| **v).count()
    }
}

/// The four tables of one collected dataset.
#[derive(Debug, Clone)]
pub struct DatasetBundle {
    pub all_food: FoodTable,
    pub extended_food: FoodTable,
    pub interactions: Vec<InteractionRecord>,
    pub extended_interactions: Vec<ExtendedInteractionRecord>,
}

impl DatasetBundle {
    /// Worker ids present in the main interaction data, sorted.
    pub fn worker_ids(&self) -> Vec<WorkerId> {
        let mut ids: Vec<WorkerId> = self
            .interactions
            .iter()
            .map(|r| r.worker_id.clone())
            .collect();
        ids.sort();
        ids.dedup();
        ids
    }
}
