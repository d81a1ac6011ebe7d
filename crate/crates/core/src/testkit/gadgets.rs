//! Instances from the hardness reductions, with role-bearing agent names.
//!
//! Every list is complete: the listed prefix comes first and the remaining
//! agents follow in ascending index order.

use super::{GadgetInputError, GadgetOutput, SetSystem, SimpleGraph};
use crate::engine;
use crate::model::{Action, ActionKind, AgentRef, Instance, Matching, PresenceMask, Side};
use crate::solvers::{Budget, Goal, Target};

#[derive(Default)]
struct Builder {
    names: [Vec<String>; 2],
    heads: [Vec<Vec<usize>>; 2],
}

impl Builder {
    fn add(&mut self, side: Side, name: String) -> usize {
        self.names[side.idx()].push(name);
        self.heads[side.idx()].push(Vec::new());
        self.names[side.idx()].len() - 1
    }

    fn man(&mut self, name: String) -> usize {
        self.add(Side::Man, name)
    }

    fn woman(&mut self, name: String) -> usize {
        self.add(Side::Woman, name)
    }

    fn prefer(&mut self, side: Side, agent: usize, head: Vec<usize>) {
        self.heads[side.idx()][agent] = head;
    }

    fn build(self) -> Instance {
        let [men_names, women_names] = self.names;
        let (n_men, n_women) = (men_names.len(), women_names.len());
        let complete = |head: &Vec<usize>, other: usize| {
            let mut list = head.clone();
            list.extend((0..other).filter(|x| !head.contains(x)));
            list
        };
        let men = self.heads[0].iter().map(|h| complete(h, n_women)).collect();
        let women = self.heads[1].iter().map(|h| complete(h, n_men)).collect();
        Instance::new(men, women)
            .expect("gadget lists are permutations")
            .with_labels(men_names, women_names)
            .expect("gadget names are unique")
    }
}

fn choose2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

fn edge_name(prefix: &str, (u, v): (usize, usize)) -> String {
    format!("{prefix}_{}_{}", u + 1, v + 1)
}

/// Constructive-Exists-Add instance from a Clique instance.
///
/// Adding a vertex gadget's extra man frees its vertex man for one of `k`
/// slot women, and adding an edge gadget's extra man frees its edge man for
/// a penalizing woman once both endpoint gadgets are freed.
pub fn gadget_clique_add(g: &SimpleGraph, k: usize) -> Result<GadgetOutput, GadgetInputError> {
    if k < 2 {
        return Err(GadgetInputError::Parameter("k must be at least 2".into()));
    }
    let (n, edges) = (g.vertex_count(), g.edges());
    let q = choose2(k);
    let mut b = Builder::default();
    let m_v: Vec<usize> = (0..n).map(|v| b.man(format!("mV_{}", v + 1))).collect();
    let m_vp: Vec<usize> = (0..n).map(|v| b.man(format!("mVx_{}", v + 1))).collect();
    let m_e: Vec<usize> = edges.iter().map(|&e| b.man(edge_name("mE", e))).collect();
    let m_ep: Vec<usize> = edges.iter().map(|&e| b.man(edge_name("mEx", e))).collect();
    let m_star = b.man("mStar".into());
    let w_v: Vec<usize> = (0..n).map(|v| b.woman(format!("wV_{}", v + 1))).collect();
    let w_e: Vec<usize> = edges.iter().map(|&e| b.woman(edge_name("wE", e))).collect();
    let w_t: Vec<usize> = (0..k).map(|t| b.woman(format!("wSlot_{}", t + 1))).collect();
    let w_pen: Vec<usize> = (0..q).map(|i| b.woman(format!("wPen_{}", i + 1))).collect();
    let w_star = b.woman("wStar".into());
    // Balance the sides; filling agents come last and so are ranked last by everyone.
    let (men, women) = (b.names[0].len(), b.names[1].len());
    for i in 0..men.saturating_sub(women) {
        b.woman(format!("wFill_{}", i + 1));
    }
    for i in 0..women.saturating_sub(men) {
        b.man(format!("mFill_{}", i + 1));
    }

    for v in 0..n {
        let mut head = vec![m_vp[v]];
        head.extend(g.incident(v).iter().map(|&e| m_e[e]));
        head.push(m_v[v]);
        b.prefer(Side::Woman, w_v[v], head);
        b.prefer(Side::Man, m_vp[v], vec![w_v[v]]);
        let mut head = vec![w_v[v]];
        head.extend(&w_t);
        head.push(w_star);
        b.prefer(Side::Man, m_v[v], head);
    }
    for (i, &(u, v)) in edges.iter().enumerate() {
        b.prefer(Side::Woman, w_e[i], vec![m_ep[i], m_e[i]]);
        let mut head = vec![w_e[i], w_v[u], w_v[v]];
        head.extend(&w_pen);
        b.prefer(Side::Man, m_e[i], head);
        b.prefer(Side::Man, m_ep[i], vec![w_e[i]]);
    }
    for &t in &w_t {
        b.prefer(Side::Woman, t, m_v.clone());
    }
    for &p in &w_pen {
        let mut head = m_e.clone();
        head.push(m_star);
        b.prefer(Side::Woman, p, head);
    }
    let mut head = w_pen.clone();
    head.push(w_star);
    b.prefer(Side::Man, m_star, head);
    let mut head = m_v.clone();
    head.push(m_star);
    b.prefer(Side::Woman, w_star, head);

    let instance = b.build().with_addable(m_vp.iter().chain(&m_ep).copied(), []).expect("indices in range");
    Ok(GadgetOutput {
        instance,
        goal: Goal::ConstEx,
        target: Target::Pair { man: m_star, woman: w_star },
        budget: Budget::Finite(k + q),
        note: format!("clique-add: {n} vertices, {} edges, k={k}", edges.len()),
    })
}

/// Shared Constructive-Exists instance for acceptability deletion and reordering, from a Clique instance.
pub fn gadget_clique_accdel_reorder(g: &SimpleGraph, k: usize) -> Result<GadgetOutput, GadgetInputError> {
    if k < 2 {
        return Err(GadgetInputError::Parameter("k must be at least 2".into()));
    }
    let (n, edges) = (g.vertex_count(), g.edges());
    let q = choose2(k);
    let mut b = Builder::default();
    let m_v: Vec<usize> = (0..n).map(|v| b.man(format!("mV_{}", v + 1))).collect();
    let m_vp: Vec<usize> = (0..n).map(|v| b.man(format!("mVx_{}", v + 1))).collect();
    let m_e: Vec<usize> = edges.iter().map(|&e| b.man(edge_name("mE", e))).collect();
    let m_ep: Vec<usize> = edges.iter().map(|&e| b.man(edge_name("mEx", e))).collect();
    let m_epp: Vec<usize> = edges.iter().map(|&e| b.man(edge_name("mEy", e))).collect();
    let m_pen: Vec<usize> = (0..q).map(|i| b.man(format!("mPen_{}", i + 1))).collect();
    let m_star = b.man("mStar".into());
    let w_v: Vec<usize> = (0..n).map(|v| b.woman(format!("wV_{}", v + 1))).collect();
    let w_vp: Vec<usize> = (0..n).map(|v| b.woman(format!("wVx_{}", v + 1))).collect();
    let w_e: Vec<usize> = edges.iter().map(|&e| b.woman(edge_name("wE", e))).collect();
    let w_ep: Vec<usize> = edges.iter().map(|&e| b.woman(edge_name("wEx", e))).collect();
    let w_epp: Vec<usize> = edges.iter().map(|&e| b.woman(edge_name("wEy", e))).collect();
    let w_pen: Vec<usize> = (0..q).map(|i| b.woman(format!("wPen_{}", i + 1))).collect();
    let w_star = b.woman("wStar".into());

    for v in 0..n {
        let inc = g.incident(v);
        let mut head = vec![m_vp[v]];
        head.extend(inc.iter().map(|&e| m_e[e]));
        head.push(m_v[v]);
        b.prefer(Side::Woman, w_v[v], head);
        b.prefer(Side::Woman, w_vp[v], vec![m_vp[v], m_v[v]]);
        let mut head = vec![w_vp[v]];
        head.extend(inc.iter().map(|&e| w_e[e]));
        head.push(w_v[v]);
        b.prefer(Side::Man, m_v[v], head);
        b.prefer(Side::Man, m_vp[v], vec![w_vp[v], w_v[v]]);
    }
    for (i, &(u, v)) in edges.iter().enumerate() {
        let mut head = vec![w_ep[i], w_v[u], w_v[v]];
        head.extend(&w_pen);
        b.prefer(Side::Man, m_e[i], head);
        b.prefer(Side::Man, m_ep[i], vec![w_epp[i], w_e[i]]);
        let mut head = vec![m_ep[i], m_v[u], m_v[v]];
        head.extend(&m_pen);
        b.prefer(Side::Woman, w_e[i], head);
        b.prefer(Side::Woman, w_ep[i], vec![m_epp[i], m_e[i]]);
        b.prefer(Side::Man, m_epp[i], vec![w_epp[i], w_ep[i]]);
        b.prefer(Side::Woman, w_epp[i], vec![m_epp[i], m_ep[i]]);
    }
    for i in 0..q {
        let mut head = m_e.clone();
        head.push(m_star);
        b.prefer(Side::Woman, w_pen[i], head);
        let mut head = w_e.clone();
        head.push(w_star);
        b.prefer(Side::Man, m_pen[i], head);
    }
    let mut head = w_pen.clone();
    head.push(w_star);
    b.prefer(Side::Man, m_star, head);
    let mut head = m_pen.clone();
    head.push(m_star);
    b.prefer(Side::Woman, w_star, head);

    Ok(GadgetOutput {
        instance: b.build(),
        goal: Goal::ConstEx,
        target: Target::Pair { man: m_star, woman: w_star },
        budget: Budget::Finite(q + k),
        note: format!("clique-accdel: {n} vertices, {} edges, k={k}", edges.len()),
    })
}

/// The manipulation a clique induces on [`gadget_clique_accdel_reorder`]'s instance.
///
/// Each clique vertex releases its vertex gadget and each clique edge its
/// edge gadget: by deleting the gadget's top pair, or by reordering the
/// gadget's extra man to put his second choice first.
pub fn clique_forward_actions(inst: &Instance, g: &SimpleGraph, clique: &[usize], action: ActionKind) -> Vec<Action> {
    let find = |name: String| inst.find_label(&name).expect("gadget agent").index;
    let mut gadgets: Vec<(usize, usize, usize)> = clique
        .iter()
        .map(|&v| (find(format!("mVx_{}", v + 1)), find(format!("wVx_{}", v + 1)), find(format!("wV_{}", v + 1))))
        .collect();
    for &(u, v) in g.edges() {
        if clique.contains(&u) && clique.contains(&v) {
            let e = (u, v);
            gadgets.push((find(edge_name("mEy", e)), find(edge_name("wEy", e)), find(edge_name("wEx", e))));
        }
    }
    gadgets
        .into_iter()
        .map(|(man, top, second)| match action {
            ActionKind::AccDelete => Action::AccDelete { man, woman: top },
            _ => {
                let agent = AgentRef::man(man);
                let mut list = vec![second];
                list.extend(inst.prefs(Side::Man, man).iter().copied().filter(|&w| w != second));
                Action::Reorder { agent, list }
            }
        })
        .collect()
}

/// Exact-Exists/Exact-Unique-Delete instance from an Independent Set instance.
///
/// Adjacent vertex couples block each other, and each vertex couple has
/// `2|V|` dummy couples that force deleting both agents of a couple or neither.
pub fn gadget_is_delete(g: &SimpleGraph, k: usize) -> Result<GadgetOutput, GadgetInputError> {
    let n = g.vertex_count();
    let dummies = 2 * n;
    let mut b = Builder::default();
    let m_v: Vec<usize> = (0..n).map(|v| b.man(format!("mV_{}", v + 1))).collect();
    let m_d: Vec<Vec<usize>> =
        (0..n).map(|v| (0..dummies).map(|i| b.man(format!("mDum_{}_{}", v + 1, i + 1))).collect()).collect();
    let w_v: Vec<usize> = (0..n).map(|v| b.woman(format!("wV_{}", v + 1))).collect();
    let w_d: Vec<Vec<usize>> =
        (0..n).map(|v| (0..dummies).map(|i| b.woman(format!("wDum_{}_{}", v + 1, i + 1))).collect()).collect();

    for v in 0..n {
        let nb = g.neighbors(v);
        let mut head: Vec<usize> = nb.iter().map(|&u| w_v[u]).collect();
        head.push(w_v[v]);
        head.extend(&w_d[v]);
        b.prefer(Side::Man, m_v[v], head);
        let mut head: Vec<usize> = nb.iter().map(|&u| m_v[u]).collect();
        head.push(m_v[v]);
        head.extend(&m_d[v]);
        b.prefer(Side::Woman, w_v[v], head);
        for i in 0..dummies {
            b.prefer(Side::Man, m_d[v][i], vec![w_v[v], w_d[v][i]]);
            b.prefer(Side::Woman, w_d[v][i], vec![m_v[v], m_d[v][i]]);
        }
    }
    let instance = b.build();
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|v| (m_v[v], w_v[v])).collect();
    for v in 0..n {
        pairs.extend((0..dummies).map(|i| (m_d[v][i], w_d[v][i])));
    }
    let target = Matching::from_pairs(instance.men_count(), instance.women_count(), pairs).expect("disjoint pairs");
    Ok(GadgetOutput {
        instance,
        goal: Goal::ExactEx,
        target: Target::Matching(target),
        budget: Budget::Finite(2 * n.saturating_sub(k)),
        note: format!("is-delete: {n} vertices, {} edges, k={k}", g.edges().len()),
    })
}

/// Agents of the hitting-set gadgets, in index order: element couples, then per set its two couples.
struct HsLayout {
    instance: Instance,
    target: Matching,
}

fn hs_layout(s: &SetSystem, element_women: impl Fn(usize, &[usize], usize) -> Vec<usize>) -> HsLayout {
    let z = s.universe_size();
    let mut b = Builder::default();
    let m_z: Vec<usize> = (0..z).map(|i| b.man(format!("mZ_{}", i + 1))).collect();
    let mut m_f = Vec::new();
    for j in 0..s.sets().len() {
        m_f.push([b.man(format!("mF_{}_1", j + 1)), b.man(format!("mF_{}_2", j + 1))]);
    }
    let w_z: Vec<usize> = (0..z).map(|i| b.woman(format!("wZ_{}", i + 1))).collect();
    let mut w_f = Vec::new();
    for j in 0..s.sets().len() {
        w_f.push([b.woman(format!("wF_{}_1", j + 1)), b.woman(format!("wF_{}_2", j + 1))]);
    }
    let first_men: Vec<usize> = m_f.iter().map(|p| p[0]).collect();
    for i in 0..z {
        b.prefer(Side::Man, m_z[i], vec![w_z[i]]);
        let head = element_women(i, &first_men, m_z[i]);
        b.prefer(Side::Woman, w_z[i], head);
    }
    for (j, set) in s.sets().iter().enumerate() {
        let mut head = vec![w_f[j][0]];
        head.extend(set.iter().map(|&e| w_z[e]));
        head.push(w_f[j][1]);
        b.prefer(Side::Man, m_f[j][0], head);
        b.prefer(Side::Man, m_f[j][1], vec![w_f[j][1], w_f[j][0]]);
        b.prefer(Side::Woman, w_f[j][0], vec![m_f[j][1], m_f[j][0]]);
        b.prefer(Side::Woman, w_f[j][1], vec![m_f[j][0], m_f[j][1]]);
    }
    let instance = b.build();
    let pairs = (0..z)
        .map(|i| (m_z[i], w_z[i]))
        .chain((0..s.sets().len()).flat_map(|j| [(m_f[j][0], w_f[j][0]), (m_f[j][1], w_f[j][1])]))
        .collect::<Vec<_>>();
    let target = Matching::from_pairs(instance.men_count(), instance.women_count(), pairs).expect("disjoint pairs");
    HsLayout { instance, target }
}

/// Exact-Unique-Reorder instance from a Hitting Set instance; the target is the man-optimal matching.
///
/// Each set gadget carries a rotation that only a reordered element woman
/// of the set can break.
pub fn gadget_hs_reorder(s: &SetSystem, k: usize) -> GadgetOutput {
    let layout = hs_layout(s, |_, _, m_z| vec![m_z]);
    let optimal = engine::gale_shapley(&layout.instance, &PresenceMask::all(&layout.instance), Side::Man);
    debug_assert_eq!(optimal, layout.target);
    GadgetOutput {
        instance: layout.instance,
        goal: Goal::ExactUni,
        target: Target::Matching(optimal),
        budget: Budget::Finite(k),
        note: format!("hs-reorder: |Z|={}, {} sets, k={k}", s.universe_size(), s.sets().len()),
    }
}

/// Exact-Unique-Add variant: element women start absent and rank the first
/// men of their sets above their partners.
pub fn gadget_hs_add(s: &SetSystem, k: usize) -> GadgetOutput {
    let layout = hs_layout(s, |z, first_men, m_z| {
        let mut head: Vec<usize> = s.containing(z).iter().map(|&j| first_men[j]).collect();
        head.push(m_z);
        head
    });
    let women: Vec<usize> = (0..s.universe_size()).collect();
    let instance = layout.instance.with_addable([], women).expect("indices in range");
    GadgetOutput {
        instance,
        goal: Goal::ExactUni,
        target: Target::Matching(layout.target),
        budget: Budget::Finite(k),
        note: format!("hs-add: |Z|={}, {} sets, k={k}", s.universe_size(), s.sets().len()),
    }
}

/// The manipulation a hitting set induces on the hitting-set gadgets: each
/// chosen element woman ranks the first men of her sets above her partner
/// (reordering), or simply joins (adding).
pub fn hs_forward_actions(out: &GadgetOutput, s: &SetSystem, hitting: &[usize], action: ActionKind) -> Vec<Action> {
    let inst = &out.instance;
    let find = |name: String| inst.find_label(&name).expect("gadget agent").index;
    hitting
        .iter()
        .map(|&z| {
            let agent = AgentRef::woman(find(format!("wZ_{}", z + 1)));
            match action {
                ActionKind::Add => Action::AddAgent(agent),
                _ => {
                    let mut head: Vec<usize> = s.containing(z).iter().map(|&j| find(format!("mF_{}_1", j + 1))).collect();
                    head.push(find(format!("mZ_{}", z + 1)));
                    let mut list = head.clone();
                    list.extend(inst.prefs(Side::Woman, agent.index).iter().copied().filter(|m| !head.contains(m)));
                    Action::Reorder { agent, list }
                }
            }
        })
        .collect()
}

/// `r` couples with cyclically shifted lists: `mD_i` ranks `wD_i, wD_i+1, ...` and symmetrically.
pub fn dummy_block(r: usize) -> Instance {
    assert!(r >= 1, "empty block");
    let shift = |i: usize| (0..r).map(|j| (i + j) % r).collect::<Vec<_>>();
    let men = (0..r).map(shift).collect();
    let women = (0..r).map(shift).collect();
    Instance::complete(men, women)
        .with_labels((1..=r).map(|i| format!("mD_{i}")).collect(), (1..=r).map(|i| format!("wD_{i}")).collect())
        .expect("unique names")
}
