//! MONK's problems file format.
//!
//! Each line is `class a1 a2 a3 a4 a5 a6 id`, whitespace separated, with
//! 1-based attribute values on disk. Values are stored 0-based and the id
//! column is dropped.

use std::sync::Arc;

use infodd_core::{ConsistencyPolicy, DecisionTable, Row, TableSchema, VariableSpec};

use crate::error::{Error, Result};

pub const MONKS_ARITIES: [usize; 6] = [3, 3, 2, 3, 4, 2];

pub fn monks_schema() -> TableSchema {
    let vars = MONKS_ARITIES
        .iter()
        .enumerate()
        .map(|(i, &arity)| {
            VariableSpec::new(format!("a{}", i + 1), (1..=arity).map(|v| v.to_string()).collect())
                .expect("monks arities are at least 2")
        })
        .collect();
    TableSchema::new(vars, vec!["0".into(), "1".into()]).expect("monks schema is valid")
}

pub fn parse_monks(text: &str, policy: ConsistencyPolicy) -> Result<DecisionTable> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 8 && fields.len() != 7 {
            return Err(Error::Format { line: line_no, reason: format!("expected 8 fields, got {}", fields.len()) });
        }
        let class = match fields[0] {
            "0" => 0,
            "1" => 1,
            other => return Err(Error::Format { line: line_no, reason: format!("unknown class `{other}`") }),
        };
        let mut values = Vec::with_capacity(6);
        for (a, (&field, &arity)) in fields[1..7].iter().zip(&MONKS_ARITIES).enumerate() {
            match field.parse::<u32>() {
                Ok(v) if v >= 1 && v as usize <= arity => values.push(v - 1),
                _ => {
                    return Err(Error::Format {
                        line: line_no,
                        reason: format!("unknown value `{field}` for attribute a{}", a + 1),
                    })
                }
            }
        }
        rows.push(Row::new(values, class));
    }
    Ok(DecisionTable::new(Arc::new(monks_schema()), rows, policy)?)
}

/// Writes rows in MONK's layout with ids `data_1`, `data_2`, ....
pub fn format_monks(table: &DecisionTable) -> String {
    let mut out = String::new();
    for (i, row) in table.rows().iter().enumerate() {
        out.push(' ');
        out.push_str(&row.output.to_string());
        for v in &row.values {
            out.push(' ');
            out.push_str(&(v + 1).to_string());
        }
        out.push_str(&format!(" data_{}\n", i + 1));
    }
    out
}

/// Target concept of MONK's problem 1, 2 or 3 on 0-based attribute values.
/// Problem 3 is the noise-free concept.
pub fn concept(problem: u8, a: &[u32; 6]) -> Option<bool> {
    // attribute values on disk are 1-based
    let v = a.map(|x| x + 1);
    match problem {
        1 => Some(v[0] == v[1] || v[4] == 1),
        2 => Some(v.iter().filter(|&&x| x == 1).count() == 2),
        3 => Some((v[4] == 3 && v[3] == 1) || (v[4] != 4 && v[1] != 3)),
        _ => None,
    }
}

/// The full 432-point attribute space labeled by a problem's concept, in
/// the order of the published test files (last attribute fastest).
pub fn concept_table(problem: u8) -> Result<DecisionTable> {
    let mut rows = Vec::with_capacity(432);
    let mut a = [0u32; 6];
    loop {
        let class = concept(problem, &a).ok_or_else(|| Error::Invalid(format!("no MONK's problem {problem}")))?;
        rows.push(Row::new(a.to_vec(), class as u32));
        let mut i = 6;
        loop {
            if i == 0 {
                return Ok(DecisionTable::new(Arc::new(monks_schema()), rows, ConsistencyPolicy::Strict)?);
            }
            i -= 1;
            a[i] += 1;
            if (a[i] as usize) < MONKS_ARITIES[i] {
                break;
            }
            a[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use infodd_core::TableError;

    #[test]
    fn parses_standard_lines() {
        let text = " 1 1 1 1 1 3 1 data_5\n 0 3 3 2 3 4 2 data_432\n\n";
        let t = parse_monks(text, ConsistencyPolicy::Strict).unwrap();
        assert_eq!(t.rows(), &[Row::new(vec![0, 0, 0, 0, 2, 0], 1), Row::new(vec![2, 2, 1, 2, 3, 1], 0)]);
        assert_eq!(t.schema().variables().iter().map(|v| v.arity()).collect::<Vec<_>>(), MONKS_ARITIES);
        assert_eq!(parse_monks(&format_monks(&t), ConsistencyPolicy::Strict).unwrap(), t);
    }

    #[test]
    fn concept_tables() {
        let positives = |p| concept_table(p).unwrap().rows().iter().filter(|r| r.output == 1).count();
        for p in 1..=3 {
            let t = concept_table(p).unwrap();
            assert_eq!(t.len(), 432);
            assert_eq!(t.rows()[0].values, vec![0; 6]);
        }
        // published class balance of the test files
        assert_eq!(positives(1), 216);
        assert_eq!(positives(2), 142);
        assert_eq!(positives(3), 228);
        assert!(concept_table(4).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let strict = ConsistencyPolicy::Strict;
        assert!(matches!(parse_monks("", strict), Err(Error::Table(TableError::EmptyTable))));
        assert!(matches!(parse_monks(" 1 1 1 1 1 3\n", strict), Err(Error::Format { line: 1, .. })));
        assert!(matches!(parse_monks(" 1 1 1 3 1 3 1 x\n", strict), Err(Error::Format { line: 1, .. })));
        assert!(matches!(parse_monks(" 1 1 1 1 1 0 1 x\n", strict), Err(Error::Format { .. })));
        assert!(matches!(parse_monks(" 2 1 1 1 1 1 1 x\n", strict), Err(Error::Format { .. })));
        let noisy = " 1 1 1 1 1 1 1 a\n 0 1 1 1 1 1 1 b\n 0 1 1 1 1 1 1 c\n";
        assert!(parse_monks(noisy, strict).is_err());
        assert_eq!(parse_monks(noisy, ConsistencyPolicy::Majority).unwrap().len(), 3);
    }
}
