//! Closed vocabularies of the supported Vega-Lite subset.

use std::fmt;

/// A closed set of keyword values with a canonical spelling.
pub trait Vocabulary: Copy + Eq + Ord + fmt::Debug + 'static {
    const ALL: &'static [Self];

    fn as_str(self) -> &'static str;

    fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|v| v.as_str() == s)
    }

    /// Vocabulary entry closest to `s` by edit distance; ties go to the
    /// alphabetically smaller keyword.
    fn nearest(s: &str) -> Self {
        Self::nearest_among(s, Self::ALL).expect("vocabulary is never empty")
    }

    fn nearest_among(s: &str, pool: &[Self]) -> Option<Self> {
        pool.iter()
            .copied()
            .min_by(|a, b| {
                edit_distance(s, a.as_str())
                    .cmp(&edit_distance(s, b.as_str()))
                    .then_with(|| a.as_str().cmp(b.as_str()))
            })
    }
}

macro_rules! vocabulary {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $kw:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl Vocabulary for $name {
            const ALL: &'static [Self] = &[$($name::$variant),+];

            fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $kw),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl serde::Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl<'de> serde::Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                <$name as Vocabulary>::from_keyword(&s).ok_or_else(|| {
                    serde::de::Error::custom(format!(
                        concat!("unknown ", stringify!($name), " `{}`"),
                        s
                    ))
                })
            }
        }
    };
}

vocabulary! {
    /// Mark types.
    Mark {
        Point => "point",
        Bar => "bar",
        Line => "line",
        Area => "area",
        Tick => "tick",
        Text => "text",
        Rect => "rect",
    }
}

vocabulary! {
    /// Encoding channels. Declaration order is the channel precedence used
    /// for deterministic tie-breaks (positional channels first).
    Channel {
        X => "x",
        Y => "y",
        Color => "color",
        Size => "size",
        Shape => "shape",
        Text => "text",
        Row => "row",
        Column => "column",
        Detail => "detail",
    }
}

vocabulary! {
    /// Measurement type of an encoded field.
    FieldType {
        Quantitative => "quantitative",
        Ordinal => "ordinal",
        Nominal => "nominal",
        Temporal => "temporal",
    }
}

vocabulary! {
    /// Aggregation operations.
    Aggregate {
        Count => "count",
        Mean => "mean",
        Median => "median",
        Min => "min",
        Max => "max",
        Sum => "sum",
        Stdev => "stdev",
    }
}

vocabulary! {
    /// Stack offsets.
    StackMode {
        Zero => "zero",
        Normalize => "normalize",
        Center => "center",
        None => "none",
    }
}

/// Levenshtein distance with unit insert/delete/substitute costs.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.chars().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != *cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edit_distance_basics() {
        assert_eq!(edit_distance("", ""), 0);
        assert_eq!(edit_distance("poin", "point"), 1);
        assert_eq!(edit_distance("kitten", "sitting"), 3);
        assert_eq!(edit_distance("abc", ""), 3);
    }

    #[test]
    fn nearest_token() {
        assert_eq!(Mark::nearest("poin"), Mark::Point);
        assert_eq!(Mark::nearest("barr"), Mark::Bar);
        assert_eq!(Channel::nearest("colr"), Channel::Color);
        assert_eq!(Aggregate::nearest("avg"), Aggregate::Max);
        assert_eq!(Aggregate::nearest("meen"), Aggregate::Mean);
    }

    #[test]
    fn nearest_ties_are_alphabetical() {
        // "z" is one substitution away from both "x" and "y".
        assert_eq!(Channel::nearest("z"), Channel::X);
    }

    #[test]
    fn keywords_round_trip() {
        for m in Mark::ALL {
            assert_eq!(Mark::from_keyword(m.as_str()), Some(*m));
        }
        assert_eq!(Channel::from_keyword("X"), None);
    }
}
