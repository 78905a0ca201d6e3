//! Bundled theorem suites and the acceptance checks run by `modalkit suite`
//! and the `acceptance` test target.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decision::{
    bounded_countermodel, consistent, enumerate_mcs, extend_mcs, finite_closure, tableau_sat, FiniteMcs, Logic,
    SearchResult, TableauResult,
};
use crate::formula::{conjunct, imply, parse, render, Agent, Formula, SchemaName};
use crate::gen::{random_s4_proof, random_topo_proof, FormulaGen};
use crate::hilbert::{
    check_proof, prove_imply_conjunct_equiv, prove_k_conj_imply_factor, prove_k_imp, prove_k_over_conjunct,
    prove_k_thm, skeleton_atoms, Direction, Proof, ProofBuilder, System, MAX_ATOMS,
};
use crate::kripke::{
    class_check, enumerate_frames, enumerate_valuations, eval, frame_from_masks, frame_in_class, is_reflexive,
    is_transitive, random_model, validates_schema, FrameClass, Model, PointedModel,
};
use crate::topospace::{enumerate_topologies, specialization_frame, topo_eval, PointSet, TopoModel, BOX_AGENT};
use crate::toposys::{check_topo_proof, prove_axiom_k_topo, prove_nec_topo, s4_to_topo, topo_to_s4, TopoProof};

const A1: Agent = Agent(1);

/// A named theorem with a certificate in `system`.
#[derive(Clone, Debug)]
pub struct Theorem {
    pub name: String,
    pub system: System,
    pub proof: Proof,
}

impl Theorem {
    pub fn conclusion(&self) -> &Formula {
        self.proof.conclusion().expect("non-empty proof")
    }
}

fn f(s: &str) -> Formula {
    parse(s).expect("suite formula")
}

fn built(name: impl Into<String>, system: System, build: impl FnOnce(&mut ProofBuilder) -> usize) -> Theorem {
    let mut b = ProofBuilder::normal();
    let at = build(&mut b);
    Theorem {
        name: name.into(),
        system,
        proof: b.finish(at),
    }
}

fn lemma(name: impl Into<String>, system: System, proof: Proof) -> Theorem {
    Theorem {
        name: name.into(),
        system,
        proof,
    }
}

fn know(phi: &Formula) -> Formula {
    Formula::know(A1, phi.clone())
}

fn bel(phi: &Formula) -> Formula {
    Formula::bel(A1, phi.clone())
}

/// `K φ → B φ`: axiom T on `¬Kφ`, contraposed.
fn knowledge_implies_belief(b: &mut ProofBuilder, phi: &Formula) -> usize {
    let t = b.instance(SchemaName::AxT, A1, &Formula::neg(know(phi)), None);
    b.glue(&[t], Formula::imp(know(phi), bel(phi)))
}

/// `B φ → B K φ`: axiom 4 under `L`.
fn strong_belief(b: &mut ProofBuilder, phi: &Formula) -> usize {
    let four = b.instance(SchemaName::Ax4, A1, phi, None);
    b.diamond_mono(four, A1)
}

/// `B φ → K B φ`: strong belief, then .2 on `Kφ`.
fn positive_introspection(b: &mut ProofBuilder, phi: &Formula) -> usize {
    let sb = strong_belief(b, phi);
    let two = b.instance(SchemaName::Ax2, A1, &know(phi), None);
    b.glue(&[sb, two], Formula::imp(bel(phi), know(&bel(phi))))
}

/// `¬B φ → K ¬B φ`: axiom 4 on `¬Kφ` plus double negation under `K`.
fn negative_introspection(b: &mut ProofBuilder, phi: &Formula) -> usize {
    let nk = Formula::neg(know(phi));
    let four = b.instance(SchemaName::Ax4, A1, &nk, None);
    let dn = b.taut(Formula::imp(know(&nk), Formula::neg(Formula::neg(know(&nk)))));
    let mono = b.box_mono(dn, A1);
    let not_b = Formula::neg(bel(phi));
    b.glue(&[four, mono], Formula::imp(not_b.clone(), know(&not_b)))
}

/// `B φ → ¬B ¬φ`: axiom .2 and double negation.
fn consistency_of_belief(b: &mut ProofBuilder, phi: &Formula) -> usize {
    let two = b.instance(SchemaName::Ax2, A1, phi, None);
    let goal = Formula::imp(bel(phi), Formula::neg(bel(&Formula::neg(phi.clone()))));
    b.glue(&[two], goal)
}

/// The S4.2 theorem suite: one agent, one variable, at least 30 proofs.
pub fn s42_suite() -> Vec<Theorem> {
    let (k, s4, s42) = (System::k(), System::s4(), System::s42());
    let mut out = Vec::new();
    for text in ["p", "~p", "K1 p"] {
        let phi = f(text);
        out.push(built(format!("positive introspection [{text}]"), s42.clone(), |b| {
            positive_introspection(b, &phi)
        }));
        out.push(built(format!("negative introspection [{text}]"), s4.clone(), |b| {
            negative_introspection(b, &phi)
        }));
        out.push(built(format!("knowledge implies belief [{text}]"), s4.clone(), |b| {
            knowledge_implies_belief(b, &phi)
        }));
        out.push(built(format!("consistency of belief [{text}]"), s42.clone(), |b| {
            consistency_of_belief(b, &phi)
        }));
        out.push(built(format!("strong belief [{text}]"), s4.clone(), |b| strong_belief(b, &phi)));
    }
    for text in ["p", "~p", "K1 p", "L1 p"] {
        out.push(built(format!("axiom .2 [{text}]"), s42.clone(), |b| {
            b.instance(SchemaName::Ax2, A1, &f(text), None)
        }));
    }
    for (a, c) in [("p", "p"), ("p", "~p"), ("K1 p", "L1 p")] {
        let pr = prove_k_thm(&k, A1, &f(a), &f(c)).expect("k_thm");
        out.push(lemma(format!("K_thm [{a}, {c}]"), k.clone(), pr));
    }
    for (a, c, t) in [("p", "~p", "false"), ("p", "K1 p", "p"), ("L1 p", "p", "K1 p")] {
        let pr = prove_k_conj_imply_factor(&k, A1, &f(a), &f(c), &f(t)).expect("factor");
        out.push(lemma(format!("K_conj_imply_factor [{a}, {c}, {t}]"), k.clone(), pr));
    }
    out.push(lemma(
        "implication form of K [p, K1 p]",
        k.clone(),
        prove_k_imp(&k, A1, &f("p"), &f("K1 p")).expect("k_imp"),
    ));
    let list = [f("p"), f("~p"), f("K1 p")];
    let (fwd, bwd) = prove_k_over_conjunct(&k, A1, &list).expect("k_over_conjunct");
    out.push(lemma("K over conjunct, forward [p, ~p, K1 p]", k.clone(), fwd));
    out.push(lemma("K over conjunct, backward [p, ~p, K1 p]", k.clone(), bwd));
    let psis = [f("K1 p"), f("p")];
    let source = {
        let mut b = ProofBuilder::normal();
        let t = b.taut(imply(&psis, f("p")));
        b.finish(t)
    };
    let pr = prove_imply_conjunct_equiv(&k, &psis, &f("p"), Direction::ImplyToConjunct, &source).expect("equiv");
    out.push(lemma("imply to conjunct [K1 p, p; p]", k.clone(), pr));
    out.push(built("axiom K [p, K1 p]", k.clone(), |b| {
        b.instance(SchemaName::AxK, A1, &f("p"), Some(&f("K1 p")))
    }));
    out.push(built("T dual", s4.clone(), |b| {
        let t = b.instance(SchemaName::AxT, A1, &f("~p"), None);
        b.glue(&[t], f("p -> L1 p"))
    }));
    out.push(built("4 dual", s4.clone(), |b| {
        let four = b.instance(SchemaName::Ax4, A1, &f("~p"), None);
        let dn = b.taut(f("K1 ~p -> ~~K1 ~p"));
        let mono = b.box_mono(dn, A1);
        b.glue(&[four, mono], f("L1 L1 p -> L1 p"))
    }));
    out.push(built("knowledge implies known belief", s4.clone(), |b| {
        let four = b.instance(SchemaName::Ax4, A1, &f("p"), None);
        let kb = knowledge_implies_belief(b, &f("p"));
        let mono = b.box_mono(kb, A1);
        b.glue(&[four, mono], f("K1 p -> K1 L1 K1 p"))
    }));
    out.push(built("known belief is belief", s4, |b| {
        b.instance(SchemaName::AxT, A1, &f("L1 K1 p"), None)
    }));
    out
}

/// Native topological proofs exercising N, R, RM and the derived rules.
pub fn topo_suite() -> Vec<(String, TopoProof)> {
    let mut out = Vec::new();
    let single = |s: SchemaName, phi: &str, psi: Option<&str>| {
        let mut b = ProofBuilder::topo();
        let at = b.instance(s, A1, &f(phi), psi.map(f).as_ref());
        b.finish(at)
    };
    out.push(("axiom N".to_string(), single(SchemaName::AxN, "p", None)));
    out.push(("axiom R [p, ~p]".to_string(), single(SchemaName::AxR, "p", Some("~p"))));
    out.push(("axiom R [K1 p, p]".to_string(), single(SchemaName::AxR, "K1 p", Some("p"))));
    out.push(("axiom T".to_string(), single(SchemaName::AxT, "L1 p", None)));
    out.push(("axiom 4".to_string(), single(SchemaName::Ax4, "~p", None)));
    out.push(("derived K [p, q]".to_string(), prove_axiom_k_topo(A1, &f("p"), &f("q"))));
    out.push(("derived K [K1 p, p]".to_string(), prove_axiom_k_topo(Agent(2), &f("K1 p"), &f("p"))));
    let taut = {
        let mut b = ProofBuilder::topo();
        let t = b.taut(f("p -> p | q"));
        b.finish(t)
    };
    out.push(("derived necessitation".to_string(), prove_nec_topo(A1, &taut).expect("nec")));
    out.push(("monotonicity".to_string(), {
        let mut b = ProofBuilder::topo();
        let t = b.taut(f("p & q -> q"));
        let m = b.rm(t, Agent(2));
        b.finish(m)
    }));
    out
}

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct Report {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {} ({}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

/// Collects violations; the report keeps the first few.
struct Tally {
    failures: usize,
    examples: Vec<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures += 1;
            if self.examples.len() < 3 {
                self.examples.push(what());
            }
        }
    }

    fn finish(self, id: usize, name: &'static str, start: Instant, summary: String, limit: Option<Duration>) -> Report {
        let elapsed = start.elapsed();
        let mut passed = self.failures == 0;
        let mut detail = summary;
        if self.failures > 0 {
            detail = format!("{detail}; {} violation(s), e.g. {}", self.failures, self.examples.join(" | "));
        }
        if let Some(limit) = limit {
            if elapsed > limit {
                passed = false;
                detail = format!("{detail}; took {:.1}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs());
            }
        }
        Report {
            id,
            name,
            passed,
            detail,
            elapsed,
        }
    }
}

/// Criterion 1: Every S4.2 suite theorem checks and holds on weakly-directed preorders.
pub fn soundness(seed: u64) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let suite = s42_suite();
    t.check(suite.len() >= 30, || format!("suite has only {} theorems", suite.len()));
    let s42 = System::s42();
    let mut theorems = Vec::new();
    for th in &suite {
        match check_proof(&s42, &th.proof) {
            Ok(c) => theorems.push((th.name.clone(), c)),
            Err(e) => t.check(false, || format!("{}: {e}", th.name)),
        }
    }
    let holds = |m: &Model, t: &mut Tally| {
        for w in 0..m.frame.worlds {
            for (name, c) in &theorems {
                t.check(eval(m, w, c) == Ok(true), || format!("{name} fails at world {w}"));
            }
        }
    };
    let mut exhaustive = 0;
    for n in 1..=3 {
        for fr in enumerate_frames(n, &[A1], FrameClass::WeaklyDirectedPreorder).expect("frames") {
            for m in enumerate_valuations(&fr, &["p"]).expect("valuations") {
                holds(&m, &mut t);
                exhaustive += 1;
            }
        }
    }
    for k in 0..1000u64 {
        let n = 1 + (k % 4) as usize;
        let m = random_model(n, &[A1], &["p"], FrameClass::WeaklyDirectedPreorder, seed.wrapping_add(k)).expect("model");
        t.check(frame_in_class(&m.frame, FrameClass::WeaklyDirectedPreorder), || {
            format!("random model {k} is not a weakly-directed preorder")
        });
        holds(&m, &mut t);
    }
    let summary = format!(
        "{} theorems checked in S42; {exhaustive} exhaustive and 1000 random models",
        theorems.len()
    );
    t.finish(1, "S4.2 soundness", start, summary, Some(Duration::from_secs(120)))
}

/// Criterion 2: Frame correspondence for T, 4 and .2.
pub fn correspondence(_seed: u64) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut preorders = Vec::new();
    for rel in 0u32..512 {
        let fr = frame_from_masks(3, &[A1], &[rel]);
        let refl = is_reflexive(&fr, A1);
        let trans = is_transitive(&fr, A1);
        t.check(validates_schema(&fr, SchemaName::AxT, A1) == Ok(refl), || format!("T vs reflexivity at {rel:#b}"));
        t.check(validates_schema(&fr, SchemaName::Ax4, A1) == Ok(trans), || format!("4 vs transitivity at {rel:#b}"));
        if refl && trans {
            preorders.push(fr);
        }
    }
    t.check(preorders.len() == 29, || format!("{} preorders on 3 worlds", preorders.len()));
    for fr in &preorders {
        let wd = class_check(fr, A1, FrameClass::WeaklyDirected);
        t.check(validates_schema(fr, SchemaName::Ax2, A1) == Ok(wd), || format!(".2 vs weak directedness on {fr:?}"));
    }
    let summary = format!("512 relations; {} preorders", preorders.len());
    t.finish(2, "correspondence", start, summary, Some(Duration::from_secs(60)))
}

/// Criterion 3: The .2-specific witnesses.
pub fn dot_two_witnesses(_seed: u64) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let two = crate::formula::instantiate_schema(SchemaName::Ax2, A1, &f("p"), None).expect("unary");
    let fork = PointedModel {
        model: Model::new(crate::kripke::Frame::new(3).with_relation(A1, [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)]))
            .with_true("p", [1]),
        world: 0,
    };
    match bounded_countermodel(FrameClass::Preorder, &two, 3) {
        Ok(SearchResult::Countermodel(pm)) => {
            t.check(eval(&pm.model, pm.world, &two) == Ok(false), || "preorder witness does not refute .2".into());
            t.check(frame_in_class(&pm.model.frame, FrameClass::Preorder), || "witness not a preorder".into());
            t.check(pm == fork, || format!("witness is not the fork: {pm:?}"));
        }
        other => t.check(false, || format!("preorder search returned {other:?}")),
    }
    let wd = bounded_countermodel(FrameClass::WeaklyDirectedPreorder, &two, 4);
    t.check(wd == Ok(SearchResult::NoneUpTo(4)), || format!("weakly-directed search returned {wd:?}"));
    let five = f("L1 p -> K1 L1 p");
    match bounded_countermodel(FrameClass::WeaklyDirectedPreorder, &five, 2) {
        Ok(SearchResult::Countermodel(pm)) => {
            t.check(eval(&pm.model, pm.world, &five) == Ok(false), || "S5 witness does not refute".into());
            t.check(frame_in_class(&pm.model.frame, FrameClass::WeaklyDirectedPreorder), || {
                "S5 witness outside the class".into()
            });
        }
        other => t.check(false, || format!("S5 separation search returned {other:?}")),
    }
    t.finish(3, ".2 witnesses", start, "fork, NONE-UP-TO 4, chain".into(), None)
}

/// Criterion 4: Translations between S4 and the topological system.
pub fn equivalence(seed: u64) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let s4 = System::s4();
    let round_trip = |name: &str, pr: &Proof, t: &mut Tally| {
        let Some(goal) = pr.conclusion().cloned() else { return };
        match s4_to_topo(pr) {
            Ok(tp) => {
                t.check(check_topo_proof(&tp) == Ok(goal.clone()), || format!("{name}: s4_to_topo output"));
                match topo_to_s4(&tp) {
                    Ok(back) => t.check(check_proof(&s4, &back) == Ok(goal.clone()), || format!("{name}: round trip")),
                    Err(e) => t.check(false, || format!("{name}: topo_to_s4 {e}")),
                }
            }
            Err(e) => t.check(false, || format!("{name}: s4_to_topo {e}")),
        }
    };
    let mut theorems = 0;
    for th in s42_suite() {
        if check_proof(&s4, &th.proof).is_ok() {
            round_trip(&th.name, &th.proof, &mut t);
            theorems += 1;
        }
    }
    t.check(theorems >= 20, || format!("only {theorems} S4 theorems"));
    let native = topo_suite();
    for (name, tp) in &native {
        let goal = check_topo_proof(tp);
        t.check(goal.is_ok(), || format!("{name}: does not check"));
        match topo_to_s4(tp) {
            Ok(pr) => {
                t.check(check_proof(&s4, &pr) == goal, || format!("{name}: topo_to_s4 output"));
                round_trip(name, &pr, &mut t);
            }
            Err(e) => t.check(false, || format!("{name}: topo_to_s4 {e}")),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..100 {
        let pr = random_s4_proof(&mut rng, 10);
        let goal = check_proof(&s4, &pr);
        t.check(goal.is_ok(), || format!("random S4 proof {k} does not check"));
        let out = s4_to_topo(&pr).and_then(|tp| check_topo_proof(&tp));
        t.check(out == goal, || format!("random S4 proof {k}: {out:?}"));
        let tp = random_topo_proof(&mut rng, 10);
        let goal = check_topo_proof(&tp);
        t.check(goal.is_ok(), || format!("random topo proof {k} does not check"));
        let out = topo_to_s4(&tp).and_then(|pr| check_proof(&s4, &pr));
        t.check(out == goal, || format!("random topo proof {k}: {out:?}"));
    }
    let summary = format!(
        "{theorems} S4 theorems and {} topological proofs round-tripped; 100 random proofs each way",
        native.len()
    );
    t.finish(4, "axiomatization equivalence", start, summary, None)
}

/// Criterion 5: Randomized instances of the derived-rule builders.
pub fn builders(seed: u64) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let k = System::k();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = FormulaGen::new(3, &["p", "q"], &[A1, Agent(2)]);
    let list = |rng: &mut ChaCha8Rng| -> Vec<Formula> {
        let len = rng.gen_range(0..=4);
        (0..len).map(|_| g.sample(rng)).collect()
    };
    let mut done = 0;
    while done < 100 {
        let psis = list(&mut rng);
        let phi = if !psis.is_empty() && rng.gen_bool(0.7) {
            psis[rng.gen_range(0..psis.len())].clone()
        } else {
            let a = g.sample(&mut rng);
            Formula::imp(a.clone(), a)
        };
        // Instances must respect the tautology checker's atom cap.
        if skeleton_atoms(&imply(&psis, phi.clone())) > MAX_ATOMS {
            continue;
        }
        done += 1;
        let source = {
            let mut b = ProofBuilder::normal();
            let at = b.taut(imply(&psis, phi.clone()));
            b.finish(at)
        };
        let there = prove_imply_conjunct_equiv(&k, &psis, &phi, Direction::ImplyToConjunct, &source);
        let target = Formula::imp(conjunct(&psis), phi.clone());
        match there {
            Ok(pr) => {
                t.check(check_proof(&k, &pr) == Ok(target), || format!("imply->conjunct on {phi}"));
                let back = prove_imply_conjunct_equiv(&k, &psis, &phi, Direction::ConjunctToImply, &pr);
                let back = back.map_err(|e| e.to_string()).and_then(|b| check_proof(&k, &b).map_err(|e| e.to_string()));
                t.check(back == Ok(imply(&psis, phi.clone())), || format!("conjunct->imply on {phi}: {back:?}"));
            }
            Err(e) => t.check(false, || format!("imply->conjunct on {phi}: {e}")),
        }
    }
    for _ in 0..100 {
        let psis = list(&mut rng);
        let i = *[A1, Agent(2)].get(rng.gen_range(0..2)).unwrap();
        let kc = Formula::know(i, conjunct(&psis));
        let ck = conjunct(&psis.iter().map(|p| Formula::know(i, p.clone())).collect::<Vec<_>>());
        match prove_k_over_conjunct(&k, i, &psis) {
            Ok((fwd, bwd)) => {
                t.check(check_proof(&k, &fwd) == Ok(Formula::imp(kc.clone(), ck.clone())), || {
                    format!("K over conjunct forward, {} items", psis.len())
                });
                t.check(check_proof(&k, &bwd) == Ok(Formula::imp(ck, kc)), || {
                    format!("K over conjunct backward, {} items", psis.len())
                });
            }
            Err(e) => t.check(false, || format!("K over conjunct: {e}")),
        }
    }
    for _ in 0..100 {
        let (a, b, c) = (g.sample(&mut rng), g.sample(&mut rng), g.sample(&mut rng));
        let (ka, kb) = (Formula::know(A1, a.clone()), Formula::know(A1, b.clone()));
        let goal = Formula::imp(
            Formula::imp(Formula::and(ka, kb), c.clone()),
            Formula::imp(Formula::know(A1, Formula::and(a.clone(), b.clone())), c.clone()),
        );
        let out = prove_k_conj_imply_factor(&k, A1, &a, &b, &c).map(|pr| check_proof(&k, &pr));
        t.check(out == Ok(Ok(goal)), || format!("factor on {a}, {b}, {c}: {out:?}"));
    }
    for _ in 0..100 {
        let (a, b) = (g.sample(&mut rng), g.sample(&mut rng));
        let goal = Formula::imp(
            Formula::and(Formula::know(A1, a.clone()), Formula::poss(A1, b.clone())),
            Formula::poss(A1, Formula::and(a.clone(), b.clone())),
        );
        let out = prove_k_thm(&k, A1, &a, &b).map(|pr| check_proof(&k, &pr));
        t.check(out == Ok(Ok(goal)), || format!("K_thm on {a}, {b}: {out:?}"));
    }
    t.finish(5, "derived-rule builders", start, "4 builders x 100 instances".into(), None)
}

/// Criterion 6: S4 tableau against exhaustive search on preorders up to 4 worlds.
pub fn oracle(seed: u64) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = FormulaGen::new(4, &["p", "q"], &[A1, Agent(2)]);
    let (mut sat, mut unsat) = (0, 0);
    for _ in 0..500 {
        let phi = g.sample(&mut rng);
        let search = bounded_countermodel(FrameClass::Preorder, &Formula::neg(phi.clone()), 4);
        match tableau_sat(Logic::S4, &phi) {
            Ok(TableauResult::Sat(pm)) => {
                sat += 1;
                t.check(eval(&pm.model, pm.world, &phi) == Ok(true), || format!("witness for {phi} is wrong"));
                t.check(frame_in_class(&pm.model.frame, FrameClass::Preorder), || {
                    format!("witness for {phi} is not a preorder")
                });
                t.check(matches!(search, Ok(SearchResult::Countermodel(_))), || {
                    format!("{phi}: tableau Sat with {} worlds, search {search:?}", pm.model.frame.worlds)
                });
            }
            Ok(TableauResult::Unsat) => {
                unsat += 1;
                t.check(search == Ok(SearchResult::NoneUpTo(4)), || format!("{phi}: tableau Unsat, search found a model"));
            }
            Err(e) => t.check(false, || format!("{phi}: {e}")),
        }
    }
    let summary = format!("500 formulas: {sat} satisfiable, {unsat} unsatisfiable");
    t.finish(6, "tableau oracle", start, summary, None)
}

fn closure_suite(seed: u64) -> Vec<Vec<Formula>> {
    let mut out: Vec<Vec<Formula>> = [
        vec!["p"],
        vec!["p & q"],
        vec!["K1 p", "p"],
        vec!["K1 p -> p"],
        vec!["L1 K1 p -> K1 L1 p"],
        vec!["K1 (p | q)", "K1 p | K1 q"],
        vec!["K1 p & K2 q -> K1 (p & q)"],
        vec!["K1 K2 p", "L2 p"],
        vec!["K1 p -> K1 K1 p"],
    ]
    .iter()
    .map(|seeds| finite_closure(&seeds.iter().map(|s| f(s)).collect::<Vec<_>>()))
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = FormulaGen::new(3, &["p", "q"], &[A1, Agent(2)]);
    while out.len() < 20 {
        let c = finite_closure(&[g.sample(&mut rng)]);
        if (4..=12).contains(&c.len()) {
            out.push(c);
        }
    }
    out
}

fn mcs_violations(logic: Logic, m: &FiniteMcs, t: &mut Tally) {
    let one_of = m.members.len() == m.closure.len()
        && m.closure
            .iter()
            .zip(&m.members)
            .all(|(c, s)| s == c || *s == Formula::neg(c.clone()));
    t.check(one_of, || format!("exactly-one-of fails over {} formulas", m.closure.len()));
    t.check(consistent(logic, &m.members) == Ok(true), || "inconsistent MCS".into());
    for c in &m.closure {
        if let Formula::And(a, b) = c {
            if m.contains(a) && m.contains(b) {
                t.check(m.contains(c), || format!("not closed under conjunction: {c}"));
            }
        }
    }
}

/// Criterion 7: Finite maximal consistent sets.
pub fn mcs_properties(seed: u64) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let suite = closure_suite(seed);
    let mut total = 0;
    for closure in &suite {
        for logic in [Logic::K, Logic::S4] {
            let all = match enumerate_mcs(logic, closure) {
                Ok(all) => all,
                Err(e) => {
                    t.check(false, || format!("enumerate_mcs: {e}"));
                    continue;
                }
            };
            t.check(!all.is_empty(), || "no MCS".into());
            total += all.len();
            for m in &all {
                mcs_violations(logic, m, &mut t);
            }
            let mut seeds = vec![vec![]];
            for c in closure {
                seeds.push(vec![c.clone()]);
                seeds.push(vec![Formula::neg(c.clone())]);
            }
            for seed in seeds {
                if consistent(logic, &seed) != Ok(true) {
                    continue;
                }
                match extend_mcs(logic, &seed, closure) {
                    Ok(m) => {
                        t.check(seed.iter().all(|s| m.contains(s)), || "extension drops its seed".into());
                        t.check(all.contains(&m), || "extension not among the enumerated MCSs".into());
                    }
                    Err(e) => t.check(false, || format!("extend_mcs: {e}")),
                }
            }
        }
    }
    let summary = format!("{} closures x 2 logics, {total} MCSs", suite.len());
    t.finish(7, "finite MCS properties", start, summary, None)
}

/// Truth sets of one formula over every model, as 4-bit masks.
type Signature = Vec<u8>;

struct BridgeModels {
    topo: Vec<TopoModel>,
    kripke: Vec<Model>,
    full: Vec<u8>,
}

fn bridge_models() -> BridgeModels {
    let (mut topo, mut kripke, mut full) = (Vec::new(), Vec::new(), Vec::new());
    for n in 1..=4 {
        for opens in enumerate_topologies(n) {
            for v in 0u8..1 << n {
                let t = TopoModel {
                    points: n,
                    opens: opens.clone(),
                    valuation: Default::default(),
                }
                .with_true("p", (0..n).filter(|w| v >> w & 1 == 1));
                kripke.push(specialization_frame(&t).expect("topology"));
                topo.push(t);
                full.push((1u8 << n) - 1);
            }
        }
    }
    BridgeModels { topo, kripke, full }
}

fn points(mask: u8, n: usize) -> PointSet {
    (0..n).filter(|w| mask >> w & 1 == 1).collect()
}

/// Criterion 8: interior semantics against Kripke semantics on the specialization
/// preorder, for every formula of depth at most 4 in `p`, `⊥` and `K0`.
///
/// Formulas are explored up to semantic equivalence: the box step of each
/// model is tabulated by running both evaluators on `K0 q` for every
/// extension of `q`, and each class keeps one representative. Both
/// evaluators are compositional, so a formula agrees with its class
/// representative; every representative is also re-evaluated directly.
pub fn topological_bridge(_seed: u64) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let models = bridge_models();
    let count = models.topo.len();
    let q: Arc<str> = Arc::from("q");
    let kq = Formula::know(BOX_AGENT, Formula::Var(q.clone()));
    // box_table[side][model][extension] = truth set of K0 q.
    let mut box_table = [vec![[0u8; 16]; count], vec![[0u8; 16]; count]];
    for m in 0..count {
        let n = models.topo[m].points;
        for s in 0..=models.full[m] {
            let mut tm = models.topo[m].clone();
            tm.valuation.insert(q.clone(), points(s, n));
            let mut km = models.kripke[m].clone();
            km.valuation.insert(q.clone(), points(s, n));
            for w in 0..n {
                if topo_eval(&tm, w, &kq) == Ok(true) {
                    box_table[0][m][s as usize] |= 1 << w;
                }
                if eval(&km, w, &kq) == Ok(true) {
                    box_table[1][m][s as usize] |= 1 << w;
                }
            }
        }
    }
    let leaf = |phi: &Formula| -> [Signature; 2] {
        let side = |topo: bool| -> Signature {
            (0..count)
                .map(|m| {
                    let n = models.topo[m].points;
                    (0..n).fold(0u8, |acc, w| {
                        let holds = if topo {
                            topo_eval(&models.topo[m], w, phi) == Ok(true)
                        } else {
                            eval(&models.kripke[m], w, phi) == Ok(true)
                        };
                        acc | (holds as u8) << w
                    })
                })
                .collect()
        };
        [side(true), side(false)]
    };
    let combine = |op: u8, a: &[Signature; 2], b: &[Signature; 2]| -> [Signature; 2] {
        let side = |k: usize| -> Signature {
            (0..count)
                .map(|m| match op {
                    0 => a[k][m] | b[k][m],
                    1 => a[k][m] & b[k][m],
                    _ => (!a[k][m] | b[k][m]) & models.full[m],
                })
                .collect()
        };
        [side(0), side(1)]
    };
    let boxed = |a: &[Signature; 2]| -> [Signature; 2] {
        let side = |k: usize| -> Signature { (0..count).map(|m| box_table[k][m][a[k][m] as usize]).collect() };
        [side(0), side(1)]
    };

    let mut seen: HashMap<[Signature; 2], Formula> = HashMap::new();
    let mut level: Vec<([Signature; 2], Formula)> = Vec::new();
    for phi in [Formula::Bottom, Formula::Var(Arc::from("p"))] {
        let sig = leaf(&phi);
        seen.insert(sig.clone(), phi.clone());
        level.push((sig, phi));
    }
    let mut classes = vec![level.len()];
    let mut old: Vec<([Signature; 2], Formula)> = Vec::new();
    for depth in 1..=4 {
        let mut fresh = Vec::new();
        let everything: Vec<([Signature; 2], Formula)> = old.iter().chain(level.iter()).cloned().collect();
        let mut consider = |sig: [Signature; 2], phi: Formula, fresh: &mut Vec<([Signature; 2], Formula)>| {
            if !seen.contains_key(&sig) {
                seen.insert(sig.clone(), phi.clone());
                fresh.push((sig, phi));
            }
        };
        for (sa, a) in &level {
            consider(boxed(sa), Formula::know(BOX_AGENT, a.clone()), &mut fresh);
            for (sb, b) in &everything {
                for op in 0..3u8 {
                    for (x, y, sx, sy) in [(a, b, sa, sb), (b, a, sb, sa)] {
                        let phi = match op {
                            0 => Formula::or(x.clone(), y.clone()),
                            1 => Formula::and(x.clone(), y.clone()),
                            _ => Formula::imp(x.clone(), y.clone()),
                        };
                        consider(combine(op, sx, sy), phi, &mut fresh);
                    }
                }
            }
        }
        debug_assert!(fresh.iter().all(|(_, phi)| phi.depth() <= depth));
        old.extend(level);
        level = fresh;
        classes.push(level.len());
    }
    let mut disagreements = 0;
    for (sig, phi) in old.iter().chain(level.iter()) {
        if sig[0] != sig[1] {
            disagreements += 1;
            t.check(false, || format!("interior and Kripke readings differ on {phi}"));
        }
    }
    // Every representative is also evaluated directly by both evaluators.
    let mut direct = 0;
    for (sig, phi) in old.iter().chain(level.iter()) {
        let real = leaf(phi);
        t.check(real == *sig, || format!("tabulated semantics of {phi} differ from the evaluators"));
        direct += 1;
    }
    let total: usize = classes.iter().sum();
    let summary = format!(
        "{count} pointed topologies on <= 4 points; {total} semantic classes of depth <= 4 (per depth {classes:?}); \
         {disagreements} disagreements; {direct} representatives re-evaluated directly"
    );
    t.finish(8, "topological bridge", start, summary, None)
}

/// Criterion 9: Parser round trip on random formulas.
pub fn round_trip(seed: u64) -> Report {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = FormulaGen::new(5, &["p", "q", "r1", "x_2"], &[Agent(0), A1, Agent(2), Agent(12)]);
    for _ in 0..1000 {
        let phi = g.sample(&mut rng);
        let text = render(&phi);
        t.check(parse(&text).as_ref() == Ok(&phi), || format!("`{text}`"));
    }
    t.finish(9, "parser round trip", start, "1000 random formulas".into(), None)
}

pub type Criterion = fn(u64) -> Report;

/// `(id, suite name, check)` for every acceptance criterion.
pub const CRITERIA: [(usize, &str, Criterion); 9] = [
    (1, "soundness", soundness),
    (2, "correspondence", correspondence),
    (3, "witnesses", dot_two_witnesses),
    (4, "equivalence", equivalence),
    (5, "builders", builders),
    (6, "oracle", oracle),
    (7, "mcs", mcs_properties),
    (8, "topology", topological_bridge),
    (9, "roundtrip", round_trip),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_theorems_check_in_their_systems() {
        let suite = s42_suite();
        assert!(suite.len() >= 30);
        for th in &suite {
            assert_eq!(check_proof(&th.system, &th.proof).as_ref(), Ok(th.conclusion()), "{}", th.name);
        }
        let b = |s: &str| bel(&f(s));
        let names: HashMap<&str, &Formula> = suite.iter().map(|t| (t.name.as_str(), t.conclusion())).collect();
        assert_eq!(names["positive introspection [p]"], &Formula::imp(b("p"), know(&b("p"))));
        assert_eq!(names["knowledge implies belief [p]"], &Formula::imp(f("K1 p"), b("p")));
        assert_eq!(names["strong belief [p]"], &Formula::imp(b("p"), b("K1 p")));
        assert_eq!(names["consistency of belief [p]"], &Formula::imp(b("p"), Formula::neg(b("~p"))));
        assert_eq!(
            names["negative introspection [p]"],
            &Formula::imp(Formula::neg(b("p")), know(&Formula::neg(b("p"))))
        );
    }

    #[test]
    fn dot_two_principles_are_not_s4_theorems() {
        let s4 = System::s4();
        for th in s42_suite() {
            let needs_two = th.system == System::s42();
            assert_eq!(check_proof(&s4, &th.proof).is_err(), needs_two, "{}", th.name);
        }
    }

    #[test]
    fn topo_suite_checks() {
        for (name, pr) in topo_suite() {
            assert!(check_topo_proof(&pr).is_ok(), "{name}");
        }
    }
}
