use derange_core::derangement_table;
use serde_json::json;

use crate::args::{Format, TableArgs};
use crate::report::{Builder, CliError, Report, Table};

pub fn run(args: &TableArgs, seed: u64, format: Format) -> Result<Report, CliError> {
    let n = args.n as usize;
    let mut b = Builder::new("table", seed, args);
    let table = match derangement_table(n) {
        Ok(t) => Some(t),
        Err(e) => {
            b.fail(e.to_string());
            None
        }
    };
    let columns = table.as_ref().map(|t| t.collision_columns()).unwrap_or_default();
    let rows: Vec<(usize, Vec<Option<String>>)> = table
        .as_ref()
        .map(|t| {
            t.rows()
                .into_iter()
                .map(|(b, cells)| (b, cells.into_iter().map(|c| c.map(|c| c.to_string())).collect()))
                .collect()
        })
        .unwrap_or_default();
    let cells: Vec<_> = table
        .iter()
        .flat_map(|t| t.cells())
        .map(|(&(a, b), d)| json!({"a": a, "b": b, "c": n - a - b, "count": d.to_string()}))
        .collect();
    let result = json!({
        "n": n,
        "columns_a": columns,
        "rows": rows.iter().map(|(b, cells)| json!({"b": b, "cells": cells})).collect::<Vec<_>>(),
        "cells": cells,
    });
    Ok(b.finish(format, result, || {
        let mut t = Table::new(std::iter::once("B\\A".to_string()).chain(columns.iter().map(|a| a.to_string())));
        for (b, cells) in &rows {
            t.push(std::iter::once(b.to_string()).chain(cells.iter().map(|c| c.clone().unwrap_or_default())));
        }
        t
    }))
}
