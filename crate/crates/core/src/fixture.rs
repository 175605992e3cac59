//! Deterministic synthetic dataset with planted structure.
//!
//! Home foods cluster around a shared center in both embedding spaces;
//! each destination food is placed at a controlled taste and ingredient
//! distance from that cluster. Survey answers are drawn with probabilities
//! tied to those distances — close foods feel suitable, distant foods
//! invite trying — so relevant items are separable by the scorers while
//! label noise keeps shuffled controls at chance level.

use std::f64::consts::TAU;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::data::{
    DatasetBundle, EmbeddedFood, ExtendedInteractionRecord, FoodId, FoodTable, InteractionRecord,
    Region, TasteEval, WorkerId,
};

#[derive(Debug, Clone)]
pub struct FixtureParams {
    pub seed: u64,
    pub workers_per_region: usize,
    pub taste_dim: usize,
    pub ingredient_dim: usize,
    /// Chance that a worker has already eaten a destination food, which
    /// removes it from their candidate set.
    pub eaten_foreign_prob: f64,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams {
            seed: 2024,
            workers_per_region: 100,
            taste_dim: 8,
            ingredient_dim: 8,
            eaten_foreign_prob: 0.08,
        }
    }
}

const JAPAN_FOODS: [&str; 12] = [
    "Sushi", "Miso Soup", "Tempura", "Ramen", "Udon", "Onigiri", "Natto", "Tonkatsu", "Sukiyaki",
    "Takoyaki", "Okonomiyaki", "Oden",
];

const SEA_FOODS: [&str; 10] = [
    "Laksa", "Pho", "Pad Thai", "Satay", "Nasi Goreng", "Tom Yum", "Banh Mi", "Rendang",
    "Som Tam", "Mango Sticky Rice",
];

const CHINA_FOODS: [&str; 9] = [
    "Mapo Tofu", "Peking Duck", "Dim Sum", "Hot Pot", "Century Egg", "Stinky Tofu", "Fried Frog",
    "Xiaolongbao", "Dan Dan Noodles",
];

const EUROPE_FOODS: [&str; 9] = [
    "Paella", "Risotto", "Escargot", "Schnitzel", "Pierogi", "Moussaka", "Haggis", "Fondue",
    "Ratatouille",
];

const COOKING_METHODS: [&str; 17] = [
    "Grilled", "Fried", "Steamed", "Boiled", "Baked", "Stir-fried", "Simmered", "Pickled",
    "Roasted", "Smoked", "Braised", "Marinated", "Stewed", "Pan-fried", "Deep-fried", "Poached",
    "Cured",
];

const STAPLES: [&str; 10] = [
    "Chicken", "Pork", "Beef", "Salmon", "Mackerel", "Tofu", "Egg", "Eggplant", "Potato",
    "Cabbage",
];

/// Radii of the destination placement grid: near / mid / far from the home
/// cluster, crossed over the taste and ingredient spaces.
const RADII: [f64; 3] = [0.9, 2.4, 4.2];
const HOME_SPREAD: f64 = 0.55;

fn gauss(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

fn home_vector(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| HOME_SPREAD * gauss(rng)).collect()
}

fn placed_vector(rng: &mut impl Rng, dim: usize, radius: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..dim).map(|_| gauss(rng)).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-9);
    raw.iter().map(|x| x / norm * radius + 0.2 * gauss(rng)).collect()
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Answer probabilities as a function of the candidate's distance to the
/// worker's history mean: close foods suit, far foods tempt.
fn draw_eval(rng: &mut impl Rng, distance: f64) -> TasteEval {
    let typical = HOME_SPREAD * 8f64.sqrt(); // scale of home-cluster norms
    let suits = rng.gen_bool(logistic(2.2 * (typical + 0.4 - distance)).clamp(0.02, 0.98));
    let want = rng.gen_bool(logistic(1.6 * (distance - typical - 0.2)).clamp(0.02, 0.98));
    TasteEval { suits, want_to_try: want }
}

/// Generates the four tables of one synthetic dataset. Identical parameters
/// always produce an identical bundle.
pub fn generate(params: &FixtureParams) -> DatasetBundle {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let dt = params.taste_dim;
    let di = params.ingredient_dim;

    let mut all_rows = Vec::new();
    for (i, name) in JAPAN_FOODS.iter().enumerate() {
        all_rows.push(EmbeddedFood {
            food_id: FoodId::new(format!("J{:02}", i + 1)),
            name: name.to_string(),
            region: Region::Japan,
            taste_vec: home_vector(&mut rng, dt),
            ingredient_vec: home_vector(&mut rng, di),
        });
    }
    let destinations: [(Region, &str, &[&str]); 3] = [
        (Region::SoutheastAsia, "S", &SEA_FOODS),
        (Region::China, "C", &CHINA_FOODS),
        (Region::Europe, "E", &EUROPE_FOODS),
    ];
    for (region, prefix, names) in destinations {
        for (i, name) in names.iter().enumerate() {
            // Cycle the 3x3 (taste, ingredient) radius grid across foods so
            // every region mixes comfortable and adventurous placements.
            let taste_radius = RADII[i % 3];
            let ing_radius = RADII[(i / 3) % 3];
            all_rows.push(EmbeddedFood {
                food_id: FoodId::new(format!("{prefix}{:02}", i + 1)),
                name: name.to_string(),
                region,
                taste_vec: placed_vector(&mut rng, dt, taste_radius),
                ingredient_vec: placed_vector(&mut rng, di, ing_radius),
            });
        }
    }
    let all_food = FoodTable::from_rows(all_rows, "generated").expect("fixture table is valid");

    let mut extended_rows = Vec::new();
    let mut idx = 0;
    for method in COOKING_METHODS {
        for staple in STAPLES {
            idx += 1;
            extended_rows.push(EmbeddedFood {
                food_id: FoodId::new(format!("X{idx:03}")),
                name: format!("{method} {staple}"),
                region: Region::Japan,
                taste_vec: home_vector(&mut rng, dt),
                ingredient_vec: home_vector(&mut rng, di),
            });
        }
    }
    let extended_food =
        FoodTable::from_rows(extended_rows, "generated").expect("fixture table is valid");

    let mut interactions = Vec::new();
    let mut extended_interactions = Vec::new();
    let japan_ids: Vec<FoodId> = all_food
        .of_region(Region::Japan)
        .iter()
        .map(|f| f.food_id.clone())
        .collect();
    let extended_ids: Vec<FoodId> = extended_food.iter().map(|f| f.food_id.clone()).collect();

    for (region, _, _) in destinations {
        for w in 1..=params.workers_per_region {
            let worker_id = WorkerId::new(format!("{}_{w:03}", region.slug()));

            let eat_count = rng.gen_range(6..=10);
            let mut eaten_japan = japan_ids.clone();
            eaten_japan.shuffle(&mut rng);
            eaten_japan.truncate(eat_count);

            let ext_count = rng.gen_range(3..=8);
            let mut daily = extended_ids.clone();
            daily.shuffle(&mut rng);
            daily.truncate(ext_count);
            daily.sort();

            // History means drive this worker's survey answers.
            let mut history_taste: Vec<&[f64]> = Vec::new();
            let mut history_ing: Vec<&[f64]> = Vec::new();
            for id in &eaten_japan {
                let f = all_food.get(id).expect("generated id");
                history_taste.push(&f.taste_vec);
                history_ing.push(&f.ingredient_vec);
            }
            for id in &daily {
                let f = extended_food.get(id).expect("generated id");
                history_taste.push(&f.taste_vec);
                history_ing.push(&f.ingredient_vec);
            }
            let mean_of = |vecs: &[&[f64]], dim: usize| -> Vec<f64> {
                let mut m = vec![0.0; dim];
                for v in vecs {
                    for (mi, x) in m.iter_mut().zip(*v) {
                        *mi += x / vecs.len() as f64;
                    }
                }
                m
            };
            let taste_mean = mean_of(&history_taste, dt);
            let ing_mean = mean_of(&history_ing, di);

            for food in all_food.iter() {
                let is_home = food.region == Region::Japan;
                if !is_home && food.region != region {
                    continue;
                }
                let eaten = if is_home {
                    eaten_japan.contains(&food.food_id)
                } else {
                    rng.gen_bool(params.eaten_foreign_prob)
                };
                let taste_eval = draw_eval(&mut rng, euclid(&food.taste_vec, &taste_mean));
                let ingredient_eval = draw_eval(&mut rng, euclid(&food.ingredient_vec, &ing_mean));
                interactions.push(InteractionRecord {
                    worker_id: worker_id.clone(),
                    food_id: food.food_id.clone(),
                    eaten,
                    taste_eval,
                    ingredient_eval,
                });
            }
            for id in daily {
                extended_interactions.push(ExtendedInteractionRecord {
                    worker_id: worker_id.clone(),
                    food_id: id,
                });
            }
        }
    }

    DatasetBundle { all_food, extended_food, interactions, extended_interactions }
}
