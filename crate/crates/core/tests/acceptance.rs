//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vtt_core::compose::known_glyphs;
use vtt_core::composer::*;
use vtt_core::dsl;
use vtt_core::fixtures::membership_bar;
use vtt_core::interchange;
use vtt_core::model::*;
use vtt_core::render::glyph_svg;
use vtt_core::semantics::{equivalent, lookup_concept};
use vtt_core::validate::density;
use vtt_core::{constraint_of, denote, enumerate_family, invert, refines, seed, validate, Registry};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

const RENDER_SIZE: u32 = 128;
const DIGEST_ENV: &str = "VTT_ACCEPTANCE_RENDER_ONLY";

fn main() -> ExitCode {
    if std::env::var_os(DIGEST_ENV).is_some() {
        print!("{}", render_all(&seed::registry()));
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 8] = [
        ("enumeration count", enumeration_count),
        ("four-class semantics", four_classes),
        ("refinement soundness", refinement_soundness),
        ("seed registry", seed_registry),
        ("violation detection", violation_detection),
        ("round trips", round_trips),
        ("rendering determinism and distinctness", rendering),
        ("density", density_scores),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {}: {name} ... PASS ({detail}; {ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: {name} ... FAIL ({why}; {ms} ms)", i + 1)
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn registry_of(n: usize) -> Registry {
    Registry::new(membership_bar(n)).unwrap()
}

/// Every mark assignment over a radical's regions, built directly rather than
/// through the enumerator.
fn all_assignments(radical: &Radical, marks: &[&str]) -> Vec<Glyph> {
    let mut out = vec![Glyph::bare(radical.id.clone())];
    for region in &radical.schema.regions {
        let mut next = Vec::new();
        for g in &out {
            next.push(g.clone());
            for m in marks {
                next.push(g.clone().with_mark(&region.name, m));
            }
        }
        out = next;
    }
    out
}

/// Literal satisfaction checked element by element against raw valuations.
fn brute_denote(lits: &[(String, bool)], model: &UniverseModel) -> BTreeSet<String> {
    model
        .carrier
        .iter()
        .filter(|x| {
            lits.iter().all(|(c, positive)| {
                let member = model.valuation[&ConstraintId::new(c.as_str())].contains(*x);
                member == *positive
            })
        })
        .cloned()
        .collect()
}

fn enumeration_count() -> Outcome {
    let start = Instant::now();
    let r = seed::registry();
    let radical = r.radical(&"bar7".into()).ok_or("seed lacks the seven-region bar")?;
    ensure!(radical.schema.len() == 7, "bar7 has {} regions", radical.schema.len());
    let fam = enumerate_family(radical, r.marks()).map_err(|e| e.to_string())?;
    let oracle = 3u64.pow(7);
    ensure!(fam.count() == oracle, "count {} != {oracle}", fam.count());
    let glyphs: Vec<Glyph> = fam.iter().collect();
    ensure!(glyphs.len() as u64 == oracle, "iterator yielded {}", glyphs.len());
    let forms: BTreeSet<Glyph> = glyphs.iter().map(|g| canonicalize(g, &r)).collect();
    ensure!(forms.len() as u64 == oracle, "only {} canonical forms", forms.len());
    let literal_sets: BTreeSet<Vec<String>> =
        glyphs.iter().map(|g| constraint_of(g, &r).map(|l| l.to_strings())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure!(literal_sets.len() as u64 == oracle, "only {} literal sets", literal_sets.len());
    let direct: BTreeSet<Glyph> = all_assignments(radical, &["dot", "circle"]).iter().map(|g| canonicalize(g, &r)).collect();
    ensure!(direct == forms, "enumerator disagrees with direct construction");
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(5), "took {took:?}");
    Ok(format!("{oracle} glyphs, pairwise non-equivalent"))
}

fn four_classes() -> Outcome {
    let r = seed::registry();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let models = 250;
    for _ in 0..models {
        let n = rng.gen_range(1..=12);
        let carrier: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
        let a: Vec<String> = carrier.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let b: Vec<String> = carrier.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let m = UniverseModel::new(carrier.clone())
            .with_valuation("in-a", a.clone())
            .and_then(|m| m.with_valuation("in-b", b.clone()))?;
        let (sa, sb): (BTreeSet<String>, BTreeSet<String>) = (a.into_iter().collect(), b.into_iter().collect());
        let u: BTreeSet<String> = carrier.into_iter().collect();
        let expected: [(&str, &str, BTreeSet<String>); 4] = [
            ("circle", "dot", sb.difference(&sa).cloned().collect()),
            ("dot", "circle", sa.difference(&sb).cloned().collect()),
            ("dot", "dot", sa.intersection(&sb).cloned().collect()),
            ("circle", "circle", u.iter().filter(|x| !sa.contains(*x) && !sb.contains(*x)).cloned().collect()),
        ];
        let mut union = BTreeSet::new();
        let mut total = 0;
        for (ma, mb, want) in &expected {
            let g = Glyph::bare("bar2").with_mark("a", ma).with_mark("b", mb);
            let got = denote(&g, &m, &r).map_err(|e| e.to_string())?;
            let lits = [("in-a".to_owned(), *ma == "dot"), ("in-b".to_owned(), *mb == "dot")];
            ensure!(&got == want, "a={ma} b={mb}: {got:?} != {want:?}");
            ensure!(got == brute_denote(&lits, &m), "a={ma} b={mb} disagrees with literal oracle");
            total += got.len();
            union.extend(got);
        }
        ensure!(total == union.len(), "classes overlap");
        ensure!(union == u, "classes miss part of the carrier");
    }
    Ok(format!("{models} random models, carriers up to 12"))
}

fn refinement_soundness() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0usize;
    for n in 1..=3 {
        let r = registry_of(n);
        let radical = r.radical(&"bar".into()).unwrap();
        let glyphs = all_assignments(radical, &["dot", "circle"]);
        let constraints: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();

        // every valuation of every constraint over a two-element carrier
        let subsets: [&[&str]; 4] = [&[], &["x"], &["y"], &["x", "y"]];
        let mut models = Vec::new();
        for code in 0..4usize.pow(n as u32) {
            let mut m = UniverseModel::new(["x", "y"]);
            let mut k = code;
            for c in &constraints {
                m = m.with_valuation(c, subsets[k % 4].iter().copied())?;
                k /= 4;
            }
            models.push(m);
        }

        // one element per combination of memberships
        let mut free = UniverseModel::new((0..1u32 << n).map(|v| format!("v{v}")));
        for (i, c) in constraints.iter().enumerate() {
            let members: Vec<String> = (0..1u32 << n).filter(|v| v >> i & 1 == 1).map(|v| format!("v{v}")).collect();
            free = free.with_valuation(c, members)?;
        }

        for g1 in &glyphs {
            for g2 in &glyphs {
                pairs += 1;
                let ord = refines(g1, g2, &r).map_err(|e| e.to_string())?;
                if ord {
                    for m in &models {
                        let (d1, d2) = (denote(g1, m, &r).unwrap(), denote(g2, m, &r).unwrap());
                        ensure!(d1.is_subset(&d2), "{} refines {} but denotes more", print(g1), print(g2));
                    }
                }
                let included = denote(g1, &free, &r).unwrap().is_subset(&denote(g2, &free, &r).unwrap());
                ensure!(included == ord, "free model: inclusion {included} but refines {ord} for {} / {}", print(g1), print(g2));
            }
        }
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    Ok(format!("{pairs} glyph pairs over 1-3 regions"))
}

fn print(g: &Glyph) -> String {
    dsl::print_glyph(g)
}

fn seed_registry() -> Outcome {
    let r = dsl::compile_source(seed::SOURCE, None).map_err(|e| e.to_string())?;
    let basic = [
        "set", "kolmogorov space", "hausdorff space", "ring, field, algebra", "module, vector space", "pairs, extensions",
        "group", "group (topological)", "lie algebra", "manifold, bundle", "classical variety", "sheaf (geometric view)",
        "(dynamical) system, triple", "process", "topological vector space", "cw complex", "simplicial set, kan complex",
        "category", "globular set, generalized category", "enriched category", "order, lattice", "deduction system, graph",
        "lambda calculus",
    ];
    let keyed: BTreeSet<String> =
        r.radicals().iter().filter(|x| x.table1_key.is_some()).map(|x| x.name.to_lowercase()).collect();
    for name in basic {
        ensure!(keyed.contains(name), "basic radical `{name}` missing");
    }

    let name_of = |g: &Glyph| lookup_concept(g, &r).map(|c| c.name.clone()).unwrap_or_else(|| "unbound".into());
    let derive = |g: &Glyph, rule: &str| apply_derivation(g, &rule.into(), &r).map_err(|e| format!("{rule}: {e}"));
    let set = Glyph::bare("set");
    let group = derive(&set, "group")?;
    let abelian = derive(&group, "abelian")?;
    let vs = derive(&abelian, "vector-space")?;
    let module = derive(&abelian, "module")?;
    let tvs = combine(&vs, &"hausdorff".into(), &r).map_err(|e| e.to_string())?;
    let banach = derive(&tvs, "banach")?;
    let hilbert = derive(&banach, "hilbert")?;
    let cstar = derive(&banach, "c-star")?;
    let category = Glyph::bare("category");
    let groupoid = derive(&category, "groupoid")?;
    let ch = place_mark(&Glyph::bare("hausdorff"), "center", Some(&"dot".into()), &r).map_err(|e| e.to_string())?;
    let topos = derive(&category, "elementary-topos")?;
    let short = abbreviate(&topos, &r).map_err(|e| e.to_string())?;
    let grothendieck = combine_at(&category, &"kolmogorov".into(), "geometric", &r).map_err(|e| e.to_string())?;
    let lattice = place_mark(&Glyph::bare("order"), "meets-joins", Some(&"dot".into()), &r).map_err(|e| e.to_string())?;
    let heyting = derive(&place_mark(&lattice, "bounds", Some(&"dot".into()), &r).map_err(|e| e.to_string())?, "heyting")?;

    let expected = [
        (&group, "group"),
        (&abelian, "abelian group"),
        (&vs, "vector space"),
        (&module, "module"),
        (&tvs, "topological vector space"),
        (&banach, "Banach space"),
        (&hilbert, "Hilbert space"),
        (&cstar, "C*-algebra"),
        (&groupoid, "groupoid"),
        (&ch, "compact Hausdorff space"),
        (&topos, "elementary topos"),
        (&short, "elementary topos"),
        (&grothendieck, "Grothendieck topos"),
        (&heyting, "Heyting algebra"),
    ];
    for (g, want) in expected {
        let got = name_of(g);
        ensure!(got == want, "{} looks up `{got}`, expected `{want}`", print(g));
    }
    ensure!(is_irregular(&grothendieck, &r), "Grothendieck topos glyph not flagged irregular");
    ensure!(!is_irregular(&tvs, &r), "topological vector space flagged irregular");

    let chain = [&set, &group, &abelian, &vs, &tvs, &banach, &hilbert];
    for w in chain.windows(2) {
        ensure!(refines(w[1], w[0], &r).unwrap_or(false), "{} does not refine {}", print(w[1]), print(w[0]));
        ensure!(!refines(w[0], w[1], &r).unwrap_or(true), "{} and {} are not strictly ordered", print(w[0]), print(w[1]));
    }

    let report = validate(&r);
    ensure!(!report.has_errors(), "validator errors:\n{}", report.to_text());
    Ok(format!("{} basic radicals, 14 derived concepts, chain of {}, 0 errors", keyed.len(), chain.len()))
}

#[derive(Clone, Copy, Debug)]
enum Injection {
    Overload,
    MissingPrecedence,
}

fn inject(defs: &mut Definitions, kind: Injection, rng: &mut ChaCha8Rng, k: usize, r: &Registry) {
    match kind {
        Injection::Overload => {
            let victim = defs.bindings.choose(rng).unwrap().clone();
            let radical = r.radical(&victim.glyph.radical).unwrap();
            // an equivalent spelling: explicit absences and shuffled storage order
            let mut twin = victim.glyph.clone();
            for region in &radical.schema.regions {
                if twin.fill(&region.name).is_none() && rng.gen_bool(0.5) {
                    twin.assignment.push(RegionFill { region: region.name.clone(), fill: Fill::Absent });
                }
            }
            twin.assignment.shuffle(rng);
            let others: Vec<ConceptId> =
                defs.concepts.iter().map(|c| c.id.clone()).filter(|c| *c != victim.concept).collect();
            let concept = if rng.gen_bool(0.5) {
                others.choose(rng).unwrap().clone()
            } else {
                let id = ConceptId::new(format!("injected-{k}"));
                defs.concepts.push(Concept {
                    id: id.clone(),
                    name: format!("injected {k}"),
                    aliases: vec![],
                    area: "fuzz".into(),
                    cryptomorphism_group: None,
                });
                id
            };
            defs.bindings.push(Binding { glyph: twin, concept, precedence: false });
        }
        Injection::MissingPrecedence => match rng.gen_range(0..3) {
            0 => {
                for b in defs.bindings.iter_mut() {
                    b.precedence = false;
                }
            }
            1 => {
                let bar7 = r.radical(&"bar7".into()).unwrap();
                let mut g = Glyph::bare("bar7");
                for region in &bar7.schema.regions {
                    if rng.gen_bool(0.6) {
                        g = g.with_mark(&region.name, if rng.gen_bool(0.5) { "dot" } else { "circle" });
                    }
                }
                let id = ConceptId::new(format!("injected-{k}"));
                defs.concepts.push(Concept {
                    id: id.clone(),
                    name: format!("injected {k}"),
                    aliases: vec![],
                    area: "fuzz".into(),
                    cryptomorphism_group: Some(format!("group-{k}")),
                });
                defs.bindings.push(Binding { glyph: g, concept: id, precedence: false });
            }
            _ => {
                let plain: Vec<usize> = defs
                    .concepts
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.cryptomorphism_group.is_none())
                    .map(|(i, _)| i)
                    .collect();
                let i = *plain.choose(rng).unwrap();
                defs.concepts[i].cryptomorphism_group = Some(format!("group-{k}"));
            }
        },
    }
}

fn violation_detection() -> Outcome {
    let base = seed::registry();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut caught = BTreeMap::<&str, usize>::new();
    let runs = 1000;
    for k in 0..runs {
        let mut defs = base.definitions().clone();
        defs.bindings.shuffle(&mut rng);
        let kind = if k % 2 == 0 { Injection::Overload } else { Injection::MissingPrecedence };
        inject(&mut defs, kind, &mut rng, k, &base);
        let r = Registry::new_lenient(defs).map_err(|e| format!("injection {k} ({kind:?}) broke construction: {e}"))?;
        let report = validate(&r);
        let code = match kind {
            Injection::Overload => "overload",
            Injection::MissingPrecedence => "missing-precedence",
        };
        ensure!(report.errors().any(|f| f.code == code), "injection {k} ({kind:?}) not flagged");
        *caught.entry(code).or_default() += 1;
    }

    let clean_runs = 200;
    for k in 0..clean_runs {
        let mut defs = base.definitions().clone();
        defs.bindings.shuffle(&mut rng);
        // drop bindings outside cryptomorphism groups; the rest stay intact
        let crypto: BTreeSet<ConceptId> =
            defs.concepts.iter().filter(|c| c.cryptomorphism_group.is_some()).map(|c| c.id.clone()).collect();
        defs.bindings.retain(|b| crypto.contains(&b.concept) || rng.gen_bool(0.7));
        let r = Registry::new_lenient(defs).map_err(|e| e.to_string())?;
        let report = validate(&r);
        ensure!(!report.has_errors(), "clean variant {k} reported errors:\n{}", report.to_text());
    }
    Ok(format!("{runs}/{runs} injections flagged ({caught:?}), {clean_runs} clean variants error-free"))
}

fn round_trips() -> Outcome {
    let ast = dsl::parse(seed::SOURCE).map_err(|e| e.to_string())?;
    let reparsed = dsl::parse(&dsl::print(&ast)).map_err(|e| e.to_string())?;
    ensure!(reparsed == ast, "parse(print(seed)) differs from seed AST");

    let r = seed::registry();
    let back = interchange::import(&interchange::export(&r)).map_err(|e| e.to_string())?;
    ensure!(back == r, "interchange round trip changed the registry");

    let mut checked = 0;
    let mut registries: Vec<(Registry, RadicalId)> = (1..=3).map(|n| (registry_of(n), RadicalId::new("bar"))).collect();
    for radical in r.radicals().iter().filter(|x| !x.schema.is_empty() && x.schema.len() <= 3) {
        registries.push((r.clone(), radical.id.clone()));
    }
    for (reg, id) in &registries {
        let radical = reg.radical(id).unwrap();
        for g in all_assignments(radical, &["dot", "circle"]) {
            if reg.validate_glyph(&g).is_err() {
                continue;
            }
            let lits = constraint_of(&g, reg).map_err(|e| e.to_string())?;
            let inv = invert(&lits, id, reg).map_err(|e| format!("{}: {e}", print(&g)))?;
            ensure!(equivalent(&inv, &g, reg), "invert(constraint_of({})) = {}", print(&g), print(&inv));
            checked += 1;
        }
    }
    Ok(format!("seed AST and registry stable, {checked} glyphs inverted"))
}

fn render_all(r: &Registry) -> String {
    let mut out = String::new();
    for (id, g) in known_glyphs(r) {
        out.push_str(&format!("== {id}\n"));
        out.push_str(&glyph_svg(&g, r, RENDER_SIZE).expect("seed glyphs render"));
    }
    out
}

fn rendering() -> Outcome {
    let here = render_all(&seed::registry());
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let child = Command::new(exe).env(DIGEST_ENV, "1").output().map_err(|e| e.to_string())?;
    ensure!(child.status.success(), "second run failed");
    ensure!(child.stdout == here.as_bytes(), "second run rendered different bytes");
    let documents = here.matches("== ").count();

    let r = seed::registry();
    let bar3 = registry_of(3);
    for (reg, id) in [(&bar3, "bar"), (&r, "order")] {
        let fam = enumerate_family(reg.radical(&id.into()).unwrap(), reg.marks()).map_err(|e| e.to_string())?;
        let docs: BTreeSet<String> = fam.iter().map(|g| glyph_svg(&g, reg, RENDER_SIZE).unwrap()).collect();
        ensure!(docs.len() == 27, "{id}: {} distinct documents of 27", docs.len());
    }

    let mut visual = 0;
    let mut glyphs: Vec<Glyph> = known_glyphs(&r).into_iter().map(|(_, g)| g).collect();
    for g in all_assignments(r.radical(&"category".into()).unwrap(), &["dot", "circle"]) {
        glyphs.push(g.clone().with_rule("elementary-topos"));
        glyphs.push(g);
    }
    glyphs.retain(|g| r.validate_glyph(g).is_ok());
    for g in &glyphs {
        let lits = constraint_of(g, &r).map_err(|e| e.to_string())?;
        let concept = lookup_concept(g, &r).map(|c| c.id.clone());
        let mut variants = Vec::new();
        if let Ok(a) = abbreviate(g, &r) {
            variants.push(expand(&a, &r).map_err(|e| e.to_string())?);
            variants.push(a);
        }
        for region in r.radical(&g.radical).unwrap().schema.regions.iter().filter(|x| x.expandable) {
            for k in [1.0, 1.25, 1.5] {
                if let Ok(e) = expand_region(g, &region.name, k, &r) {
                    variants.push(e);
                }
            }
        }
        for v in &variants {
            ensure!(constraint_of(v, &r).map_err(|e| e.to_string())? == lits, "{} changed literals", print(v));
            ensure!(lookup_concept(v, &r).map(|c| c.id.clone()) == concept, "{} changed concept", print(v));
            visual += 1;
        }
    }
    Ok(format!("{documents} seed documents identical across processes, 27+27 distinct, {visual} visual variants neutral"))
}

fn density_scores() -> Outcome {
    let r = seed::registry();
    for radical in r.radicals() {
        let d = density(&Glyph::bare(radical.id.clone()), &r).map_err(|e| format!("{}: {e}", radical.id))?;
        ensure!(d == 0.0, "bare {} scores {d}", radical.id);
    }

    let bar7 = r.radical(&"bar7".into()).unwrap();
    let bits = ((r.marks().len() + 1) as f64).log2();
    let strokes = bar7.strokes.len() as f64;
    let mut steps = 0;
    for g in all_assignments(bar7, &["dot", "circle"]) {
        let marked = g.assignment.len();
        let score = density(&g, &r).map_err(|e| e.to_string())?;
        ensure!((score - marked as f64 * bits / strokes).abs() < 1e-12, "{} scores {score}", print(&g));
        for region in bar7.schema.regions.iter().filter(|x| g.fill(&x.name).is_none()) {
            let more = density(&g.clone().with_mark(&region.name, "dot"), &r).unwrap();
            ensure!(more > score, "marking {} does not raise {}", region.name, print(&g));
            steps += 1;
        }
    }

    let mut abbreviated = 0;
    for g in all_assignments(r.radical(&"category".into()).unwrap(), &["dot", "circle"]) {
        for g in [g.clone(), g.with_rule("elementary-topos")] {
            if r.validate_glyph(&g).is_err() {
                continue;
            }
            let short = abbreviate(&g, &r).map_err(|e| e.to_string())?;
            ensure!(density(&short, &r).unwrap() == density(&g, &r).unwrap(), "abbreviation changes {}", print(&g));
            abbreviated += 1;
        }
    }
    Ok(format!("{steps} single-mark increases, {abbreviated} abbreviations score-neutral"))
}
