//! Grid specifications: `name=min:max:count` axes separated by commas,
//! e.g. `delta=0.01:pi/4:50`. Bounds accept plain numbers and multiples or
//! fractions of `pi` (`pi`, `pi/4`, `2*pi`, `3*pi/8`).

use std::f64::consts::PI;
use std::str::FromStr;

use super::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridAxis {
    /// Evenly spaced values, both ends included; the last one is exactly `max`.
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.min],
            c => {
                (0..c)
                    .map(|i| {
                        if i == c - 1 {
                            self.max
                        } else {
                            self.min + (self.max - self.min) * i as f64 / (c - 1) as f64
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub axes: Vec<GridAxis>,
}

impl GridSpec {
    pub fn axis(&self, name: &str) -> Option<&GridAxis> {
        self.axes.iter().find(|a| a.name == name)
    }

    /// Cartesian product over `names`, first name outermost. Missing axes
    /// are an error; axes not listed in `names` are rejected too.
    pub fn points(&self, names: &[&str]) -> Result<Vec<Vec<f64>>, CliError> {
        if let Some(extra) = self.axes.iter().find(|a| !names.contains(&a.name.as_str())) {
            return Err(CliError::Parse(format!(
                "grid axis `{}` is not a parameter of this family (expected {})",
                extra.name,
                names.join(", ")
            )));
        }
        let mut points = vec![Vec::new()];
        for name in names {
            let axis = self.axis(name).ok_or_else(|| CliError::Parse(format!("grid is missing axis `{name}`")))?;
            let values = axis.values();
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        Ok(points)
    }
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut axes = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = |why: &str| CliError::Parse(format!("grid axis `{part}`: {why}"));
            let (name, range) = part.split_once('=').ok_or_else(|| bad("expected name=min:max:count"))?;
            let fields: Vec<&str> = range.split(':').collect();
            let [min, max, count] = fields[..] else {
                return Err(bad("expected name=min:max:count"));
            };
            let min = parse_angle(min).ok_or_else(|| bad("bad lower bound"))?;
            let max = parse_angle(max).ok_or_else(|| bad("bad upper bound"))?;
            let count: usize = count.trim().parse().map_err(|_| bad("bad count"))?;
            if count == 0 {
                return Err(bad("count must be positive"));
            }
            if max < min {
                return Err(bad("upper bound below lower bound"));
            }
            let name = name.trim().to_string();
            if axes.iter().any(|a: &GridAxis| a.name == name) {
                return Err(bad("axis given twice"));
            }
            axes.push(GridAxis { name, min, max, count });
        }
        if axes.is_empty() {
            return Err(CliError::Parse("empty grid specification".into()));
        }
        Ok(Self { axes })
    }
}

/// Number, or `[k*]pi[/m]`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim().to_ascii_lowercase();
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().ok()?),
        None => (s.as_str(), 1.0),
    };
    let factor = match numer.strip_suffix("pi")? {
        "" => 1.0,
        "-" => -1.0,
        k => k.strip_suffix('*')?.trim().parse::<f64>().ok()?,
    };
    let v = factor * PI / denom;
    v.is_finite().then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5"), Some(0.5));
        assert_eq!(parse_angle("pi"), Some(PI));
        assert_eq!(parse_angle("pi/4"), Some(FRAC_PI_4));
        assert_eq!(parse_angle("2*pi"), Some(2.0 * PI));
        assert_eq!(parse_angle("3*pi/8"), Some(3.0 * PI / 8.0));
        assert_eq!(parse_angle("tau"), None);
    }

    #[test]
    fn axis_values_end_exactly() {
        let g: GridSpec = "delta=0.01:pi/4:50".parse().unwrap();
        let v = g.axes[0].values();
        assert_eq!(v.len(), 50);
        assert_eq!(v[0], 0.01);
        assert_eq!(v[49], FRAC_PI_4);
    }

    #[test]
    fn cartesian_order() {
        let g: GridSpec = "b=0:1:2, a=10:20:3".parse().unwrap();
        let pts = g.points(&["a", "b"]).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![10.0, 0.0]);
        assert_eq!(pts[1], vec![10.0, 1.0]);
        assert_eq!(pts[5], vec![20.0, 1.0]);
        assert!(g.points(&["a"]).is_err());
        assert!(g.points(&["a", "b", "c"]).is_err());
    }

    #[test]
    fn malformed() {
        for bad in ["", "delta", "delta=1:2", "delta=2:1:3", "delta=0:1:0", "d=0:1:2,d=0:1:2", "d=x:1:2"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }
}
