//! File loaders and writers for the four dataset tables.
//!
//! Embedding tables are CSV (`food_id,name,region,taste_vec,ingredient_vec`,
//! vectors as semicolon-separated floats) or JSON lines with the same field
//! names; interaction tables are plain CSV. All files are UTF-8 with `.` as
//! the decimal point regardless of locale.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;

use super::{
    EmbeddedFood, ExtendedInteractionRecord, FoodId, FoodTable, InteractionRecord, Region,
    TasteEval, WorkerId,
};
use crate::error::DataError;

fn io_err(path: &Path, source: std::io::Error) -> DataError {
    DataError::Io { path: path.display().to_string(), source }
}

fn parse_err(path: &Path, row: usize, message: impl Into<String>) -> DataError {
    DataError::Parse {
        path: path.display().to_string(),
        row,
        message: message.into(),
    }
}

fn parse_vector(field: &str, path: &Path, row: usize, kind: &str) -> Result<Vec<f64>, DataError> {
    field
        .split(';')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| parse_err(path, row, format!("bad {kind} component '{s}': {e}")))
        })
        .collect()
}

fn parse_bool(field: &str, path: &Path, row: usize) -> Result<bool, DataError> {
    match field.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(parse_err(path, row, format!("bad boolean '{other}'"))),
    }
}

/// Loads an embedding table. `.jsonl`/`.ndjson` files are parsed as JSON
/// lines, anything else as CSV.
pub fn load_embeddings(path: impl AsRef<Path>) -> Result<FoodTable, DataError> {
    let path = path.as_ref();
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let rows = if ext.eq_ignore_ascii_case("jsonl") || ext.eq_ignore_ascii_case("ndjson") {
        load_embedding_rows_jsonl(path)?
    } else {
        load_embedding_rows_csv(path)?
    };
    FoodTable::from_rows(rows, &path.display().to_string())
}

fn load_embedding_rows_csv(path: &Path) -> Result<Vec<EmbeddedFood>, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => io_err(path, io),
            other => parse_err(path, 1, format!("{other:?}")),
        })?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| parse_err(path, row, e.to_string()))?;
        if record.len() != 5 {
            return Err(parse_err(path, row, format!("expected 5 fields, found {}", record.len())));
        }
        let region: Region = record[2]
            .parse()
            .map_err(|e: String| parse_err(path, row, e))?;
        rows.push(EmbeddedFood {
            food_id: FoodId::new(record[0].trim()),
            name: record[1].to_string(),
            region,
            taste_vec: parse_vector(&record[3], path, row, "taste")?,
            ingredient_vec: parse_vector(&record[4], path, row, "ingredient")?,
        });
    }
    Ok(rows)
}

#[derive(Deserialize)]
struct EmbeddedFoodLine {
    food_id: String,
    name: String,
    region: String,
    taste_vec: Vec<f64>,
    ingredient_vec: Vec<f64>,
}

fn load_embedding_rows_jsonl(path: &Path) -> Result<Vec<EmbeddedFood>, DataError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let row = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: EmbeddedFoodLine =
            serde_json::from_str(line).map_err(|e| parse_err(path, row, e.to_string()))?;
        let region: Region = parsed
            .region
            .parse()
            .map_err(|e: String| parse_err(path, row, e))?;
        rows.push(EmbeddedFood {
            food_id: FoodId::new(parsed.food_id),
            name: parsed.name,
            region,
            taste_vec: parsed.taste_vec,
            ingredient_vec: parsed.ingredient_vec,
        });
    }
    Ok(rows)
}

fn format_vector(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Writes an embedding table in the canonical CSV form.
pub fn save_embeddings_csv(table: &FoodTable, path: impl AsRef<Path>) -> Result<(), DataError> {
    let path = path.as_ref();
    let mut out = String::from("food_id,name,region,taste_vec,ingredient_vec\n");
    for food in table.iter() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            food.food_id,
            food.name,
            food.region,
            format_vector(&food.taste_vec),
            format_vector(&food.ingredient_vec),
        ));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Writes an embedding table as JSON lines.
pub fn save_embeddings_jsonl(table: &FoodTable, path: impl AsRef<Path>) -> Result<(), DataError> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    for food in table.iter() {
        let line = serde_json::json!({
            "food_id": food.food_id.as_str(),
            "name": food.name,
            "region": food.region.name(),
            "taste_vec": food.taste_vec,
            "ingredient_vec": food.ingredient_vec,
        });
        writeln!(file, "{line}").map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

/// Loads main interaction records, decoding option codes and resolving food
/// ids against `foods`.
pub fn load_interactions(
    path: impl AsRef<Path>,
    foods: &FoodTable,
) -> Result<Vec<InteractionRecord>, DataError> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => io_err(path, io),
            other => parse_err(path, 1, format!("{other:?}")),
        })?;
    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| parse_err(path, row, e.to_string()))?;
        if record.len() != 5 {
            return Err(parse_err(path, row, format!("expected 5 fields, found {}", record.len())));
        }
        let worker_id = WorkerId::new(record[0].trim());
        let food_id = FoodId::new(record[1].trim());
        if !foods.contains(&food_id) {
            return Err(DataError::UnresolvableFoodId {
                path: path.display().to_string(),
                row,
                food_id: food_id.0,
            });
        }
        let eaten = parse_bool(&record[2], path, row)?;
        let decode = |field: &str| -> Result<TasteEval, DataError> {
            let code: u8 = field.trim().parse().map_err(|_| DataError::UnknownOptionCode {
                path: path.display().to_string(),
                row,
                code: field.trim().to_string(),
            })?;
            TasteEval::from_option_code(code).ok_or_else(|| DataError::UnknownOptionCode {
                path: path.display().to_string(),
                row,
                code: field.trim().to_string(),
            })
        };
        let taste_eval = decode(&record[3])?;
        let ingredient_eval = decode(&record[4])?;
        if !seen.insert((worker_id.clone(), food_id.clone())) {
            return Err(DataError::DuplicateInteraction {
                path: path.display().to_string(),
                row,
                worker_id: worker_id.0,
                food_id: food_id.0,
            });
        }
        records.push(InteractionRecord { worker_id, food_id, eaten, taste_eval, ingredient_eval });
    }
    Ok(records)
}

/// Loads daily-food interaction records. Duplicate (worker, food) pairs are
/// dropped, keeping the first occurrence.
pub fn load_extended(
    path: impl AsRef<Path>,
    foods: &FoodTable,
) -> Result<Vec<ExtendedInteractionRecord>, DataError> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => io_err(path, io),
            other => parse_err(path, 1, format!("{other:?}")),
        })?;
    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| parse_err(path, row, e.to_string()))?;
        if record.len() != 2 {
            return Err(parse_err(path, row, format!("expected 2 fields, found {}", record.len())));
        }
        let worker_id = WorkerId::new(record[0].trim());
        let food_id = FoodId::new(record[1].trim());
        if !foods.contains(&food_id) {
            return Err(DataError::UnresolvableFoodId {
                path: path.display().to_string(),
                row,
                food_id: food_id.0,
            });
        }
        if seen.insert((worker_id.clone(), food_id.clone())) {
            records.push(ExtendedInteractionRecord { worker_id, food_id });
        }
    }
    Ok(records)
}

/// Writes interaction records in the canonical CSV form.
pub fn save_interactions(
    records: &[InteractionRecord],
    path: impl AsRef<Path>,
) -> Result<(), DataError> {
    let path = path.as_ref();
    let mut out = String::from("worker_id,food_id,eaten,taste_option,ingredient_option\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.worker_id,
            r.food_id,
            r.eaten,
            r.taste_eval.option_code(),
            r.ingredient_eval.option_code(),
        ));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Writes daily-food records in the canonical CSV form.
pub fn save_extended(
    records: &[ExtendedInteractionRecord],
    path: impl AsRef<Path>,
) -> Result<(), DataError> {
    let path = path.as_ref();
    let mut out = String::from("worker_id,food_id\n");
    for r in records {
        out.push_str(&format!("{},{}\n", r.worker_id, r.food_id));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}
