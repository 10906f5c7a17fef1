//! Instantiation of a rule's fix templates into concrete actions.

use super::{Action, ActionKind, ActionValue, FixConfig};
use crate::profile::{DatasetProfile, FieldProfile};
use crate::rules::{ActionTemplate, RuleCatalog, TemplateArg, Violation};
use crate::spec::{
    edit_distance, Aggregate, Channel, ChartSpec, FieldType, Mark, StackMode, Vocabulary,
};

fn keyword<T: Vocabulary>(arg: &TemplateArg) -> Option<T> {
    match arg {
        TemplateArg::Const(s) => T::from_keyword(s),
        _ => None,
    }
}

/// Every vocabulary value for `*`, the named one otherwise.
fn values<T: Vocabulary>(arg: &TemplateArg) -> Vec<T> {
    match arg {
        TemplateArg::Any => T::ALL.to_vec(),
        other => keyword(other).into_iter().collect(),
    }
}

fn columns<'a>(
    profile: Option<&'a DatasetProfile>,
    filter: &TemplateArg,
) -> Vec<&'a FieldProfile> {
    let Some(p) = profile else {
        return Vec::new();
    };
    match filter {
        TemplateArg::Const(_) => {
            let wanted: Option<FieldType> = keyword(filter);
            p.columns().filter(|c| Some(c.inferred_type) == wanted).collect()
        }
        _ => p.columns().collect(),
    }
}

fn nearest_column<'a>(profile: Option<&'a DatasetProfile>, name: &str) -> Option<&'a FieldProfile> {
    profile?
        .columns()
        .filter(|c| c.name != name)
        .min_by(|a, b| {
            edit_distance(name, &a.name)
                .cmp(&edit_distance(name, &b.name))
                .then_with(|| a.name.cmp(&b.name))
        })
}

fn typed(c: &FieldProfile) -> ActionValue {
    ActionValue::TypedField {
        field: c.name.clone(),
        field_type: c.inferred_type,
    }
}

/// Concrete actions for one template against one violation, in enumeration
/// order. Actions that would obviously not apply are still produced; the
/// simulation step discards them.
pub(crate) fn expand_template(
    template: &ActionTemplate,
    violation: &Violation,
    spec: &ChartSpec,
    profile: Option<&DatasetProfile>,
    config: &FixConfig,
) -> Vec<Action> {
    use ActionKind as K;
    let kind = template.kind;
    let args = &template.args;

    match kind {
        K::ChangeMark => {
            return values::<Mark>(&args[0])
                .into_iter()
                .filter(|m| spec.mark.canonical != Some(*m))
                .map(|m| Action::mark(kind, m))
                .collect()
        }
        K::CorrectMark => {
            return if spec.mark.is_typo() {
                vec![Action::mark(kind, Mark::nearest(&spec.mark.raw))]
            } else {
                Vec::new()
            }
        }
        _ => {}
    }

    let key = match &args[0] {
        TemplateArg::Var(v) => match violation.binding(v) {
            Some(c) => c.text(),
            None => return Vec::new(),
        },
        TemplateArg::Const(c) => c.clone(),
        TemplateArg::Any | TemplateArg::Nearest => return Vec::new(),
    };
    if kind == K::AddChannel {
        return columns(profile, &args[1])
            .into_iter()
            .map(|c| Action::with(kind, &key, typed(c)))
            .collect();
    }
    let Some(enc) = spec.encoding(&key) else {
        return Vec::new();
    };
    let current_field = enc.field.as_deref();

    match kind {
        K::ChangeChannel => values::<Channel>(&args[1])
            .into_iter()
            .filter(|c| enc.channel.canonical != Some(*c))
            .map(|c| Action::with(kind, &key, ActionValue::Channel(c)))
            .collect(),
        K::CorrectChannel => {
            let free: Vec<Channel> = Channel::ALL
                .iter()
                .copied()
                .filter(|c| !spec.has_channel(c.as_str()))
                .collect();
            Channel::nearest_among(&enc.channel.raw, &free)
                .map(|c| Action::with(kind, &key, ActionValue::Channel(c)))
                .into_iter()
                .collect()
        }
        K::AddField => columns(profile, &args[1])
            .into_iter()
            .map(|c| Action::with(kind, &key, ActionValue::Field(c.name.clone())))
            .collect(),
        K::ChangeField => {
            let picked: Vec<&FieldProfile> = match &args[1] {
                TemplateArg::Nearest => current_field
                    .and_then(|f| nearest_column(profile, f))
                    .into_iter()
                    .collect(),
                filter => columns(profile, filter),
            };
            picked
                .into_iter()
                .filter(|c| Some(c.name.as_str()) != current_field)
                .map(|c| Action::with(kind, &key, typed(c)))
                .collect()
        }
        K::ChangeType => {
            let current = enc.field_type.as_ref().and_then(|t| t.canonical);
            values::<FieldType>(&args[1])
                .into_iter()
                .filter(|t| current != Some(*t))
                .map(|t| Action::with(kind, &key, ActionValue::Type(t)))
                .collect()
        }
        K::CorrectType => {
            let Some(raw) = enc.field_type.as_ref().filter(|t| t.is_typo()) else {
                return Vec::new();
            };
            let inferred = current_field
                .and_then(|f| profile?.get(f))
                .map(|c| c.inferred_type)
                .unwrap_or_else(|| FieldType::nearest(&raw.raw));
            vec![Action::with(kind, &key, ActionValue::Type(inferred))]
        }
        K::Aggregate | K::ChangeAggregate => {
            let current = enc.aggregate.as_ref().and_then(|a| a.canonical);
            values::<Aggregate>(&args[1])
                .into_iter()
                .filter(|a| kind == K::Aggregate || current != Some(*a))
                .map(|a| Action::with(kind, &key, ActionValue::Aggregate(a)))
                .collect()
        }
        K::CorrectAggregate => match enc.aggregate.as_ref().filter(|a| a.is_typo()) {
            Some(a) => vec![Action::with(
                kind,
                &key,
                ActionValue::Aggregate(Aggregate::nearest(&a.raw)),
            )],
            None => Vec::new(),
        },
        K::Stack => values::<StackMode>(&args[1])
            .into_iter()
            .map(|m| Action::with(kind, &key, ActionValue::Stack(m)))
            .collect(),
        K::CorrectBin => vec![Action::with(kind, &key, ActionValue::MaxBins(config.bin_default))],
        _ => vec![Action::on(kind, &key)],
    }
}

/// Concrete candidate actions of each violation, in template order and
/// without duplicates.
pub fn instantiate_candidates(
    spec: &ChartSpec,
    profile: Option<&DatasetProfile>,
    violations: &[Violation],
    catalog: &RuleCatalog,
    config: &FixConfig,
) -> Vec<(Violation, Vec<Action>)> {
    violations
        .iter()
        .map(|v| {
            let mut out: Vec<Action> = Vec::new();
            if let Some(rule) = catalog.rule(&v.rule_id) {
                for t in &rule.actions {
                    for a in expand_template(t, v, spec, profile, config) {
                        if !out.contains(&a) {
                            out.push(a);
                        }
                    }
                }
            }
            (v.clone(), out)
        })
        .collect()
}
