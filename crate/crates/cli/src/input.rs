use std::path::Path;

use poset_cde::minuscule::MinusculeCase;
use poset_cde::{Error, Partition, Poset, Result, ShapeLiteral};

/// One base poset `P`, plus how to print order ideals of it.
pub struct Input {
    pub name: String,
    pub poset: Poset,
    pub shape: Option<ShapeLiteral>,
}

impl Input {
    pub fn from_file(path: &Path) -> Result<Input> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Ok(Input {
            name: path.display().to_string(),
            poset: Poset::from_json(&text)?,
            shape: None,
        })
    }

    pub fn from_shape(lit: &str) -> Result<Input> {
        let shape: ShapeLiteral = lit.parse()?;
        Ok(Input {
            name: lit.to_string(),
            poset: shape.poset(),
            shape: Some(shape),
        })
    }

    /// `minuscule:CASE`, `chain:N`, `antichain:N` or `grid:A,B`.
    pub fn from_family(lit: &str) -> Result<Input> {
        let (kind, body) = lit
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("family literal {lit:?} needs a kind prefix")))?;
        let num = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad number {x:?} in {lit:?}")))
        };
        let poset = match kind {
            "minuscule" => body.parse::<MinusculeCase>()?.build()?,
            "chain" => Poset::chain(num(body)?),
            "antichain" => Poset::antichain(num(body)?),
            "grid" => {
                let (a, b) = body
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("expected grid:A,B, got {lit:?}")))?;
                Poset::chain(num(a)?).direct_product(&Poset::chain(num(b)?))
            }
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        };
        Ok(Input {
            name: lit.to_string(),
            poset,
            shape: None,
        })
    }

    /// Shapes print ideals as partitions; other posets as sorted element labels.
    pub fn describe(&self, members: &[usize]) -> String {
        match &self.shape {
            Some(ShapeLiteral::Shifted(s)) => or_empty(s.ideal_partition(members)),
            Some(ShapeLiteral::Skew(s)) => {
                let ends = Partition::new(s.row_ends(members))
                    .map(or_empty)
                    .unwrap_or_default();
                match Partition::new(s.inner().to_vec()) {
                    Ok(inner) if inner.size() > 0 => format!("{ends}/{inner}"),
                    _ => ends,
                }
            }
            None => {
                let labels: Vec<String> = members.iter().map(|&p| self.poset.label(p)).collect();
                format!("{{{}}}", labels.join(","))
            }
        }
    }
}

fn or_empty(p: Partition) -> String {
    if p.size() == 0 {
        "∅".to_string()
    } else {
        p.to_string()
    }
}
