use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, RwLock};

use evidiff_core::diff::{
    filter_top, inference_diff, rank, DiffError, DiffReport, FilterConfig, InferenceDiff, RelevanceRanking, Side,
};
use evidiff_core::inference::InferenceError;
use evidiff_core::layout::{LayeredLayout, LayoutConfig, LayoutError};
use evidiff_core::learning::{learn_structure, Dataset, LearnConfig, LearnError, LearnOutcome, SpaceDeclarations};
use evidiff_core::model::ModelError;
use evidiff_core::view::{build_scene, cpt_view, render_svg, CptPanel, Palette, SceneModel, SceneOptions, ViewError};
use evidiff_core::{BayesianNetwork, EvidenceSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use uuid::Uuid;

/// Evidence as sent over the wire: full variable name to value. Absent
/// variables are unobserved.
pub type NamedEvidence = BTreeMap<String, String>;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("value {value:?} is not in the event space of {variable:?}")]
    ValueNotInSpace { variable: String, value: String },
    #[error("{0} has probability zero")]
    ImpossibleEvidence(Side),
    #[error("threshold {0} is outside [0, 100]")]
    Threshold(f64),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    View(#[from] ViewError),
    #[error("inference failed: {0}")]
    Inference(String),
}

impl SessionError {
    /// The variable the request named, when that is what went wrong.
    pub fn offending_name(&self) -> Option<&str> {
        match self {
            SessionError::UnknownVariable(name) => Some(name),
            SessionError::ValueNotInSpace { variable, .. } => Some(variable),
            _ => None,
        }
    }
}

impl From<ModelError> for SessionError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::UnknownVariable(name) => SessionError::UnknownVariable(name),
            ModelError::ValueNotInSpace { variable, value } => SessionError::ValueNotInSpace { variable, value },
            other => SessionError::BadRequest(other.to_string()),
        }
    }
}

impl From<DiffError> for SessionError {
    fn from(e: DiffError) -> Self {
        match e {
            DiffError::Inference {
                side,
                source: InferenceError::ImpossibleEvidence,
            } => SessionError::ImpossibleEvidence(side),
            DiffError::Threshold(t) => SessionError::Threshold(t),
            other => SessionError::Inference(other.to_string()),
        }
    }
}

pub fn parse_evidence(net: &BayesianNetwork, named: &NamedEvidence) -> Result<EvidenceSet, SessionError> {
    Ok(EvidenceSet::from_named(net, named.iter())?)
}

/// Request body for learning a session's network from data.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LearnRequest {
    /// CSV text with a header row.
    pub dataset: String,
    #[serde(default)]
    pub config: LearnConfig,
    #[serde(default)]
    pub spaces: Option<SpaceDeclarations>,
    #[serde(default)]
    pub sample_n: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl LearnRequest {
    pub fn run(&self) -> Result<LearnOutcome, SessionError> {
        let mut data = Dataset::from_csv(self.dataset.as_bytes(), self.spaces.as_ref())?;
        if let Some(n) = self.sample_n {
            data = data.subsample(n, self.seed);
        }
        Ok(learn_structure(&data, &self.config)?)
    }
}

/// State returned after every write.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SessionSummary {
    pub e1: NamedEvidence,
    pub e2: NamedEvidence,
    pub threshold: f64,
    /// Variables eligible for ranking (observed in neither set).
    pub eligible: usize,
    /// Retained variables in reading order of relevance, evidence last.
    pub retained: Vec<String>,
}

struct Analysis {
    e1: EvidenceSet,
    e2: EvidenceSet,
    diff: InferenceDiff,
    ranking: RelevanceRanking,
}

/// One network with its two evidence sets and threshold. Posteriors and the
/// ranking are cached for the current (E1, E2) pair.
pub struct Session {
    network: Arc<BayesianNetwork>,
    layout: Arc<LayeredLayout>,
    e1: EvidenceSet,
    e2: EvidenceSet,
    threshold: FilterConfig,
    caching: bool,
    cache: Mutex<Option<Arc<Analysis>>>,
}

impl Session {
    pub fn new(network: BayesianNetwork, caching: bool) -> Result<Self, SessionError> {
        let layout = LayeredLayout::new(&network, LayoutConfig::default())?;
        let n = network.len();
        Ok(Session {
            network: Arc::new(network),
            layout: Arc::new(layout),
            e1: EvidenceSet::empty(n),
            e2: EvidenceSet::empty(n),
            threshold: FilterConfig::default(),
            caching,
            cache: Mutex::new(None),
        })
    }

    pub fn network(&self) -> &BayesianNetwork {
        &self.network
    }

    pub fn evidence(&self, side: Side) -> &EvidenceSet {
        match side {
            Side::First => &self.e1,
            Side::Second => &self.e2,
        }
    }

    pub fn threshold(&self) -> &FilterConfig {
        &self.threshold
    }

    /// Replaces one evidence set. Impossible evidence leaves the session as it was.
    pub fn set_evidence(&mut self, side: Side, named: &NamedEvidence) -> Result<(), SessionError> {
        let set = parse_evidence(&self.network, named)?;
        let (e1, e2) = match side {
            Side::First => (set, self.e2.clone()),
            Side::Second => (self.e1.clone(), set),
        };
        let analysis = compute(&self.network, &e1, &e2).map_err(|e| match e {
            // only the set being replaced can have become impossible
            SessionError::ImpossibleEvidence(_) => SessionError::ImpossibleEvidence(side),
            other => other,
        })?;
        self.e1 = e1;
        self.e2 = e2;
        let mut cache = self.cache.lock().expect("cache lock");
        *cache = self.caching.then(|| Arc::new(analysis));
        Ok(())
    }

    pub fn set_threshold(&mut self, percent: f64) -> Result<(), SessionError> {
        self.threshold = FilterConfig::new(percent)?;
        Ok(())
    }

    fn analysis(&self) -> Result<Arc<Analysis>, SessionError> {
        if self.caching {
            let cache = self.cache.lock().expect("cache lock");
            if let Some(a) = cache.as_ref() {
                if a.e1 == self.e1 && a.e2 == self.e2 {
                    return Ok(a.clone());
                }
            }
        }
        let fresh = Arc::new(compute(&self.network, &self.e1, &self.e2)?);
        if self.caching {
            *self.cache.lock().expect("cache lock") = Some(fresh.clone());
        }
        Ok(fresh)
    }

    pub fn summary(&self) -> Result<SessionSummary, SessionError> {
        let a = self.analysis()?;
        let relevant = filter_top(&a.ranking, &self.threshold);
        let name = |v: &evidiff_core::VarId| self.network.variable(*v).name.clone();
        Ok(SessionSummary {
            e1: self.e1.to_named(&self.network).into_iter().collect(),
            e2: self.e2.to_named(&self.network).into_iter().collect(),
            threshold: self.threshold.percent(),
            eligible: a.ranking.eligible_count,
            retained: relevant.top.iter().chain(&relevant.evidence).map(name).collect(),
        })
    }

    pub fn diff_report(&self) -> Result<DiffReport, SessionError> {
        let a = self.analysis()?;
        let relevant = filter_top(&a.ranking, &self.threshold);
        Ok(DiffReport::new(&self.network, &a.diff).with_filter(&self.network, &a.ranking, &relevant, &self.threshold))
    }

    pub fn scene(&self) -> Result<SceneModel, SessionError> {
        let a = self.analysis()?;
        Ok(build_scene(
            &self.network,
            &a.diff,
            &a.ranking,
            &self.threshold,
            &self.layout,
            &SceneOptions::default(),
        )?)
    }

    pub fn svg(&self) -> Result<String, SessionError> {
        Ok(render_svg(&self.scene()?))
    }

    pub fn cpt(&self, name: &str) -> Result<CptPanel, SessionError> {
        let id = self
            .network
            .var_id(name)
            .ok_or_else(|| SessionError::UnknownVariable(name.to_owned()))?;
        Ok(cpt_view(&self.network, id, &Palette::default()))
    }
}

fn compute(net: &BayesianNetwork, e1: &EvidenceSet, e2: &EvidenceSet) -> Result<Analysis, SessionError> {
    let diff = inference_diff(net, e1, e2)?;
    let ranking = rank(&diff);
    Ok(Analysis {
        e1: e1.clone(),
        e2: e2.clone(),
        diff,
        ranking,
    })
}

/// In-memory sessions. Each session has its own lock: writes to one session
/// are serialized while reads and other sessions proceed.
pub struct SessionStore {
    sessions: RwLock<HashMap<Uuid, Arc<RwLock<Session>>>>,
    caching: bool,
}

impl SessionStore {
    pub fn new(caching: bool) -> Self {
        SessionStore {
            sessions: RwLock::new(HashMap::new()),
            caching,
        }
    }

    pub fn create(&self, network: BayesianNetwork) -> Result<Uuid, SessionError> {
        let session = Session::new(network, self.caching)?;
        let id = Uuid::new_v4();
        self.sessions
            .write()
            .expect("store lock")
            .insert(id, Arc::new(RwLock::new(session)));
        Ok(id)
    }

    pub fn get(&self, id: &str) -> Result<Arc<RwLock<Session>>, SessionError> {
        Uuid::parse_str(id)
            .ok()
            .and_then(|uuid| self.sessions.read().expect("store lock").get(&uuid).cloned())
            .ok_or_else(|| SessionError::UnknownSession(id.to_owned()))
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
