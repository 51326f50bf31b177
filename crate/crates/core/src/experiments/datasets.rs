//! Classical datasets: random fitting data and the iris table.

use std::f64::consts::PI;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;
use crate::training::data::ClassicalDataset;

/// One-hot vector of length `n` with a 1 at `class`.
pub fn one_hot(class: usize, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[class] = 1.0;
    v
}

/// Features uniform in `[0, π]`, labels uniform over one-hot classes. Every
/// sample is in the training split.
pub fn gen_random_dataset(n_samples: usize, n_features: usize, n_classes: usize, seed: u64) -> Result<ClassicalDataset> {
    if n_samples == 0 || n_features == 0 || n_classes == 0 {
        return Err(Error::config(".n_samples", "sample, feature and class counts must be positive"));
    }
    let mut r = rng::stream(seed, &[]);
    let mut inputs = Vec::with_capacity(n_samples);
    let mut labels = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        inputs.push((0..n_features).map(|_| r.random_range(0.0..=PI)).collect());
        labels.push(one_hot(r.random_range(0..n_classes), n_classes));
    }
    ClassicalDataset::train_only(inputs, labels)
}

pub const IRIS_CLASSES: [&str; 3] = ["setosa", "versicolor", "virginica"];

fn iris_class(label: &str) -> Option<usize> {
    let l = label.trim().trim_matches('"');
    let l = l.strip_prefix("Iris-").or_else(|| l.strip_prefix("iris-")).unwrap_or(l);
    IRIS_CLASSES
        .iter()
        .position(|c| c.eq_ignore_ascii_case(l))
        .or_else(|| l.parse::<usize>().ok().filter(|&i| i < 3))
}

/// Parsed iris table before splitting.
#[derive(Clone, Debug, PartialEq)]
pub struct IrisTable {
    pub features: Vec<[f64; 4]>,
    pub classes: Vec<usize>,
    /// Non-empty lines in the file, header included.
    pub line_count: usize,
}

/// Reads `4 numeric columns, label`, comma separated, with an optional
/// header line.
pub fn read_iris(path: &Path) -> Result<IrisTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_iris(&text, path)
}

pub fn parse_iris(text: &str, path: &Path) -> Result<IrisTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut features = Vec::new();
    let mut classes = Vec::new();
    let mut line_count = 0;
    for (row, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        line_count += 1;
        let malformed = |message: String| Error::MalformedRow {
            path: path.to_path_buf(),
            row: row + 1,
            message,
        };
        if rec.len() != 5 {
            return Err(malformed(format!("expected 5 fields, found {}", rec.len())));
        }
        let nums: std::result::Result<Vec<f64>, _> = rec.iter().take(4).map(str::parse::<f64>).collect();
        let nums = match nums {
            Ok(n) => n,
            // A non-numeric first line is a header.
            Err(_) if row == 0 => continue,
            Err(e) => return Err(malformed(e.to_string())),
        };
        if nums.iter().any(|v| !v.is_finite()) {
            return Err(malformed("non-finite feature".into()));
        }
        let class = iris_class(&rec[4]).ok_or_else(|| Error::UnknownLabel {
            path: path.to_path_buf(),
            label: rec[4].to_string(),
        })?;
        features.push([nums[0], nums[1], nums[2], nums[3]]);
        classes.push(class);
    }
    if features.is_empty() {
        return Err(Error::MalformedRow {
            path: path.to_path_buf(),
            row: 0,
            message: "no data rows".into(),
        });
    }
    Ok(IrisTable {
        features,
        classes,
        line_count,
    })
}

/// Seeded split into `n_train` training rows and the rest for validation,
/// with every feature min-max scaled to `[0, π]` using training statistics.
/// Validation features may fall slightly outside that interval.
pub fn split_iris(table: &IrisTable, n_train: usize, seed: u64) -> Result<ClassicalDataset> {
    let n = table.features.len();
    if n_train == 0 || n_train > n {
        return Err(Error::config(".n_train", format!("must lie in 1..={n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(seed, &[]));
    let (train, validation) = order.split_at(n_train);
    let mut lo = [f64::INFINITY; 4];
    let mut hi = [f64::NEG_INFINITY; 4];
    for &i in train {
        for f in 0..4 {
            lo[f] = lo[f].min(table.features[i][f]);
            hi[f] = hi[f].max(table.features[i][f]);
        }
    }
    let inputs = table
        .features
        .iter()
        .map(|row| {
            (0..4)
                .map(|f| {
                    let span = hi[f] - lo[f];
                    if span > 0.0 {
                        PI * (row[f] - lo[f]) / span
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let labels = table.classes.iter().map(|&c| one_hot(c, 3)).collect();
    ClassicalDataset::new(inputs, labels, train.to_vec(), validation.to_vec())
}

pub fn load_iris(path: &Path, n_train: usize, seed: u64) -> Result<(ClassicalDataset, IrisTable)> {
    let table = read_iris(path)?;
    Ok((split_iris(&table, n_train, seed)?, table))
}

/// The bundled copy of the standard 150-row iris table.
pub const BUNDLED_IRIS: &str = include_str!("../../data/iris.csv");

pub fn bundled_iris() -> IrisTable {
    parse_iris(BUNDLED_IRIS, Path::new("<bundled iris.csv>")).expect("bundled iris parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_dataset_is_seeded() {
        let a = gen_random_dataset(20, 4, 2, 3).unwrap();
        assert_eq!(a, gen_random_dataset(20, 4, 2, 3).unwrap());
        assert_ne!(a, gen_random_dataset(20, 4, 2, 4).unwrap());
        assert!(a.inputs.iter().flatten().all(|x| (0.0..=PI).contains(x)));
        let one = gen_random_dataset(1, 2, 3, 0).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.labels[0].iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn bundled_iris_shape() {
        let t = bundled_iris();
        assert_eq!(t.features.len(), 150);
        assert_eq!(t.line_count, 151);
        let d = split_iris(&t, 30, 1).unwrap();
        assert_eq!(d.n_features(), 4);
        assert_eq!(d.label_len(), 3);
        assert_eq!(d.train.len(), 30);
        assert_eq!(d.validation.len(), 120);
        for &i in &d.train {
            assert!(d.inputs[i].iter().all(|x| (0.0..=PI).contains(x)));
        }
    }

    #[test]
    fn label_spellings_and_errors() {
        let p = Path::new("t.csv");
        let t = parse_iris("5.1,3.5,1.4,0.2,Iris-setosa\n6,3,4,1,versicolor\n6,3,5,2,2\n", p).unwrap();
        assert_eq!(t.classes, vec![0, 1, 2]);
        assert!(matches!(
            parse_iris("1,2,3,4,rose\n", p),
            Err(Error::UnknownLabel { label, .. }) if label == "rose"
        ));
        assert!(matches!(
            parse_iris("a,b,c,d,e\n1,2,3,4,setosa\n1,2,x,4,setosa\n", p),
            Err(Error::MalformedRow { row: 3, .. })
        ));
        assert!(matches!(parse_iris("1,2,3,setosa\n", p), Err(Error::MalformedRow { row: 1, .. })));
    }
}
