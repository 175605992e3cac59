//! Assembly of per-user history/candidate contexts and relevance labels.

use std::collections::BTreeMap;

use super::{
    DatasetBundle, Experiment, ExtendedInteractionRecord, FoodTable, InteractionRecord, Region,
    RelevanceLabels, UserContext, WorkerId,
};
use crate::error::DataError;

/// Builds the scoring context for one worker and one candidate region.
///
/// History H is every food the worker has eaten from the main table plus all
/// of their daily foods from the extended table. Candidates F are the region
/// foods the worker has not eaten: a candidate is by definition unknown to
/// the user, so eaten region foods move to H and leave F.
pub fn build_user_context(
    worker_id: &WorkerId,
    interactions: &[InteractionRecord],
    extended: &[ExtendedInteractionRecord],
    all_food: &FoodTable,
    extended_food: &FoodTable,
    region: Region,
) -> Result<UserContext, DataError> {
    let mine: Vec<&InteractionRecord> = interactions
        .iter()
        .filter(|r| &r.worker_id == worker_id)
        .collect();
    if mine.is_empty() {
        return Err(DataError::UnknownWorker { worker_id: worker_id.0.clone() });
    }

    let mut history = BTreeMap::new();
    for record in &mine {
        if record.eaten {
            if let Some(food) = all_food.get(&record.food_id) {
                history.insert(food.food_id.clone(), food.clone());
            }
        }
    }
    for record in extended.iter().filter(|r| &r.worker_id == worker_id) {
        if let Some(food) = extended_food.get(&record.food_id) {
            history.insert(food.food_id.clone(), food.clone());
        }
    }
    if history.len() < 3 {
        return Err(DataError::InsufficientHistory {
            worker_id: worker_id.0.clone(),
            found: history.len(),
        });
    }

    let mut candidates = BTreeMap::new();
    for food in all_food.of_region(region) {
        if !history.contains_key(&food.food_id) {
            candidates.insert(food.food_id.clone(), food.clone());
        }
    }

    Ok(UserContext {
        worker_id: worker_id.clone(),
        region,
        history,
        candidates,
    })
}

/// Labels every candidate of `context` as relevant or not under the
/// experiment's predicate, from the worker's survey answers.
pub fn relevance_labels(
    context: &UserContext,
    interactions: &[InteractionRecord],
    experiment: Experiment,
) -> Result<RelevanceLabels, DataError> {
    let mut labels = BTreeMap::new();
    for food_id in context.candidates.keys() {
        let record = interactions
            .iter()
            .find(|r| r.worker_id == context.worker_id && &r.food_id == food_id)
            .ok_or_else(|| DataError::MissingInteraction {
                worker_id: context.worker_id.0.clone(),
                food_id: food_id.0.clone(),
            })?;
        labels.insert(
            food_id.clone(),
            experiment.is_relevant(record.taste_eval, record.ingredient_eval),
        );
    }
    Ok(RelevanceLabels { experiment, labels })
}

/// Contexts for every worker of a region cohort, with insufficient-history
/// workers reported separately rather than failing the batch.
pub fn region_contexts(
    bundle: &DatasetBundle,
    region: Region,
) -> (Vec<UserContext>, Vec<WorkerId>) {
    let mut contexts = Vec::new();
    let mut dropped = Vec::new();
    for worker_id in bundle.worker_ids() {
        // A worker belongs to the cohort if they answered any food of the region.
        let in_cohort = bundle.interactions.iter().any(|r| {
            r.worker_id == worker_id
                && bundle
                    .all_food
                    .get(&r.food_id)
                    .is_some_and(|f| f.region == region)
        });
        if !in_cohort {
            continue;
        }
        match build_user_context(
            &worker_id,
            &bundle.interactions,
            &bundle.extended_interactions,
            &bundle.all_food,
            &bundle.extended_food,
            region,
        ) {
            Ok(ctx) => contexts.push(ctx),
            Err(DataError::InsufficientHistory { .. }) => dropped.push(worker_id),
            // Cohort membership guarantees the worker exists.
            Err(_) => unreachable!("context build can only fail on history size here"),
        }
    }
    (contexts, dropped)
}
