//! Discrete-time simulation of smart lighting control.
//!
//! A [`ControlPolicy`] is a prioritized list of rules. Every tick the rules
//! are evaluated in ascending priority (list order breaks ties) against a
//! copy of the previous actuation state, so the highest-priority rule that
//! writes a fixture decides its level. Energy uses a linear level-to-power
//! model.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::generator::LightingDesign;
use crate::geometry::{ValidatedRoom, Vec3};
use crate::photometry::{ambient_component, direct_illuminance, PhotometryError};

pub const MINUTES_PER_DAY: u32 = 1440;

/// Level used by night-wake linkage when the rule does not set one.
pub const NIGHT_LIGHT_LEVEL: f64 = 0.15;

pub const DEFAULT_GAIN: f64 = 0.5;

/// Default deadband as a fraction of the setpoint.
pub const DEFAULT_DEADBAND_FRACTION: f64 = 0.1;

pub const BLIND_CLOSED: f64 = 90.0;
pub const BLIND_OPEN: f64 = 0.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControlError {
    #[error("rule {rule} refers to unknown zone `{zone}`")]
    UnknownZone { rule: usize, zone: String },
    #[error("rule {rule} refers to unknown fixture {fixture}")]
    UnknownFixture { rule: usize, fixture: usize },
    #[error("rule {rule}: {reason}")]
    InvalidRule { rule: usize, reason: String },
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("comparison needs a baseline and at least one other policy")]
    NotEnoughPolicies,
    #[error("baseline `{0}` uses no energy")]
    ZeroBaselineEnergy(String),
    #[error(transparent)]
    Photometry(#[from] PhotometryError),
}

impl ControlError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::UnknownZone { .. } => "UnknownZone",
            Self::UnknownFixture { .. } => "UnknownFixture",
            Self::InvalidRule { .. } => "InvalidRule",
            Self::InvalidPolicy(_) => "InvalidPolicy",
            Self::InvalidSchedule(_) => "InvalidSchedule",
            Self::NotEnoughPolicies => "NotEnoughPolicies",
            Self::ZeroBaselineEnergy(_) => "ZeroBaselineEnergy",
            Self::Photometry(e) => e.name(),
        }
    }
}

/// Minute of the day. Written as `"HH:MM"`; `"24:00"` is accepted as the end
/// of the day. Plain integers are read as minutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClockTime(pub u32);

impl ClockTime {
    pub fn hm(hours: u32, minutes: u32) -> Self {
        Self(hours * 60 + minutes)
    }

    pub fn minutes(self) -> u32 {
        self.0
    }
}

impl fmt::Display for ClockTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}:{:02}", self.0 / 60, self.0 % 60)
    }
}

impl FromStr for ClockTime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected HH:MM, got `{s}`");
        let (h, m) = s.split_once(':').ok_or_else(bad)?;
        let h: u32 = h.parse().map_err(|_| bad())?;
        let m: u32 = m.parse().map_err(|_| bad())?;
        let total = h * 60 + m;
        if m >= 60 || total > MINUTES_PER_DAY {
            return Err(bad());
        }
        Ok(Self(total))
    }
}

impl Serialize for ClockTime {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClockTime {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Minutes(u32),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Minutes(m) if m <= MINUTES_PER_DAY => Ok(Self(m)),
            Raw::Minutes(m) => Err(serde::de::Error::custom(format!("{m} minutes exceeds a day"))),
        }
    }
}

/// True if `minute` (absolute) falls in the daily window `[start, end)`,
/// which may wrap past midnight.
pub fn in_daily_window(minute: u32, start: ClockTime, end: ClockTime) -> bool {
    let m = minute % MINUTES_PER_DAY;
    if start.0 < end.0 {
        start.0 <= m && m < end.0
    } else {
        m >= start.0 % MINUTES_PER_DAY || m < end.0
    }
}

/// Occupant events. Text form: `closet_open`, `enter_room(zone)`, ...
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventKind {
    ClosetOpen,
    ClosetClose,
    DresserSit,
    DresserLeave,
    NightWake,
    EnterRoom(String),
    LeaveRoom(String),
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ClosetOpen => f.write_str("closet_open"),
            Self::ClosetClose => f.write_str("closet_close"),
            Self::DresserSit => f.write_str("dresser_sit"),
            Self::DresserLeave => f.write_str("dresser_leave"),
            Self::NightWake => f.write_str("night_wake"),
            Self::EnterRoom(z) => write!(f, "enter_room({z})"),
            Self::LeaveRoom(z) => write!(f, "leave_room({z})"),
        }
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let zone_of = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_suffix(')'))
                .filter(|z| !z.is_empty())
                .map(str::to_string)
        };
        Ok(match s {
            "closet_open" => Self::ClosetOpen,
            "closet_close" => Self::ClosetClose,
            "dresser_sit" => Self::DresserSit,
            "dresser_leave" => Self::DresserLeave,
            "night_wake" => Self::NightWake,
            _ => {
                if let Some(z) = zone_of("enter_room(") {
                    Self::EnterRoom(z)
                } else if let Some(z) = zone_of("leave_room(") {
                    Self::LeaveRoom(z)
                } else {
                    return Err(format!("unknown event `{s}`"));
                }
            }
        })
    }
}

impl Serialize for EventKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EventKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleKind {
    /// Full output while the zone is occupied; off once vacant for longer
    /// than the policy's hold time.
    OccupancyOnoff { zone: String },
    /// Proportional feedback on the sensor reading while the zone is occupied.
    ConstantIlluminance { zone: String, setpoint: f64 },
    /// Closes the blind while daylight at the sensor exceeds the threshold.
    BlindControl { daylight_threshold: f64 },
    /// Full output inside a daily window.
    Timing {
        zone: String,
        on_time: ClockTime,
        off_time: ClockTime,
    },
    /// Full output inside a daily window while transmitted daylight is
    /// below the threshold.
    ThresholdTimer {
        zone: String,
        lux_threshold: f64,
        window_start: ClockTime,
        window_end: ClockTime,
    },
    /// Applies fixed levels once when the trigger fires.
    Scene {
        name: String,
        trigger: EventKind,
        levels: BTreeMap<usize, f64>,
    },
    /// Holds the zone at `dim_on` from the trigger until the off trigger.
    Linkage {
        trigger: EventKind,
        zone: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim_on: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        off_trigger: Option<EventKind>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    /// Higher wins.
    pub priority: i32,
    #[serde(flatten)]
    pub kind: RuleKind,
}

impl Rule {
    pub fn new(priority: i32, kind: RuleKind) -> Self {
        Self { priority, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlPolicy {
    pub rules: Vec<Rule>,
    pub sensor_point: Vec3,
    /// Constant-illuminance deadband in lux; 10% of each setpoint when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadband: Option<f64>,
    #[serde(default = "default_gain")]
    pub gain: f64,
    /// Minutes a vacated zone stays lit under occupancy control.
    #[serde(default)]
    pub occupancy_hold: u32,
}

fn default_gain() -> f64 {
    DEFAULT_GAIN
}

impl ControlPolicy {
    pub fn new(sensor_point: Vec3, rules: Vec<Rule>) -> Self {
        Self {
            rules,
            sensor_point,
            deadband: None,
            gain: DEFAULT_GAIN,
            occupancy_hold: 0,
        }
    }

    pub fn deadband_for(&self, setpoint: f64) -> f64 {
        self.deadband
            .unwrap_or(DEFAULT_DEADBAND_FRACTION * setpoint)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduledEvent {
    pub minute: u32,
    pub event: EventKind,
}

/// Inputs over the simulated horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub horizon: u32,
    pub dt: u32,
    /// Zone label to `[start, end)` minute intervals.
    #[serde(default)]
    pub occupancy: BTreeMap<String, Vec<[u32; 2]>>,
    /// `(minute, lux)` breakpoints of daylight at the sensor with the blind open.
    #[serde(default)]
    pub daylight: Vec<[f64; 2]>,
    #[serde(default)]
    pub events: Vec<ScheduledEvent>,
}

impl Schedule {
    pub fn new(horizon: u32, dt: u32) -> Self {
        Self {
            horizon,
            dt,
            occupancy: BTreeMap::new(),
            daylight: Vec::new(),
            events: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn ticks(&self) -> u32 {
        self.horizon / self.dt
    }

    pub fn validate(&self) -> Result<(), ControlError> {
        let bad = |m: String| Err(ControlError::InvalidSchedule(m));
        if self.dt == 0 || self.horizon == 0 {
            return bad("horizon and dt must be positive".into());
        }
        if !self.horizon.is_multiple_of(self.dt) {
            return bad(format!("dt {} does not divide horizon {}", self.dt, self.horizon));
        }
        for (zone, intervals) in &self.occupancy {
            for &[start, end] in intervals {
                if start >= end || end > self.horizon {
                    return bad(format!("zone `{zone}` interval [{start}, {end}) is not inside the horizon"));
                }
            }
        }
        let mut last = f64::NEG_INFINITY;
        for &[minute, lux] in &self.daylight {
            if !minute.is_finite() || minute < last {
                return bad("daylight breakpoints must be in ascending minute order".into());
            }
            if !(lux >= 0.0) {
                return bad(format!("negative daylight {lux} at minute {minute}"));
            }
            last = minute;
        }
        if let Some(e) = self.events.iter().find(|e| e.minute >= self.horizon) {
            return bad(format!("event {} at minute {} is past the horizon", e.event, e.minute));
        }
        Ok(())
    }

    pub fn is_occupied(&self, zone: &str, minute: u32) -> bool {
        self.occupancy
            .get(zone)
            .is_some_and(|iv| iv.iter().any(|&[s, e]| s <= minute && minute < e))
    }

    /// Piecewise-linear daylight, held constant beyond the end breakpoints.
    pub fn daylight_at(&self, minute: f64) -> f64 {
        let pts = &self.daylight;
        match pts.len() {
            0 => 0.0,
            _ if minute <= pts[0][0] => pts[0][1],
            n if minute >= pts[n - 1][0] => pts[n - 1][1],
            _ => {
                let k = pts.partition_point(|p| p[0] <= minute);
                let [x0, y0] = pts[k - 1];
                let [x1, y1] = pts[k];
                if x1 == x0 {
                    y1
                } else {
                    y0 + (y1 - y0) * (minute - x0) / (x1 - x0)
                }
            }
        }
    }
}

/// Fraction of daylight passed by the blind at `angle` degrees.
pub fn blind_transmission(angle: f64) -> f64 {
    if angle <= 0.0 {
        1.0
    } else if angle >= BLIND_CLOSED {
        0.0
    } else {
        angle.to_radians().cos()
    }
}

/// Illuminance seen by a sensor: electric light plus daylight through the blind.
pub fn sensor_reading(
    design: &LightingDesign,
    room: &ValidatedRoom,
    sensor_point: Vec3,
    dims: &[f64],
    blind_angle: f64,
    daylight_lux: f64,
) -> Result<f64, PhotometryError> {
    let direct = direct_illuminance(&design.fixtures, dims, room, sensor_point)?;
    let ambient = ambient_component(&design.fixtures, dims, room)?;
    Ok(direct + ambient + daylight_lux * blind_transmission(blind_angle))
}

/// Actuation and controller memory carried between ticks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlState {
    pub dims: Vec<f64>,
    pub blind_angle: f64,
    /// Minutes each zone has been vacant.
    pub vacant_for: BTreeMap<String, u32>,
    /// Whether each linkage rule (by rule index) is holding its zone on.
    pub linkage_active: BTreeMap<usize, bool>,
}

/// What the world looks like during one tick.
#[derive(Debug, Clone, PartialEq)]
pub struct TickInputs {
    pub minute: u32,
    pub dt: u32,
    pub occupied: BTreeMap<String, bool>,
    /// Daylight at the sensor with the blind open.
    pub daylight: f64,
    pub events: Vec<EventKind>,
}

impl TickInputs {
    fn occupied(&self, zone: &str) -> bool {
        self.occupied.get(zone).copied().unwrap_or(false)
    }
}

/// A policy checked against a design and room, ready to step.
#[derive(Debug, Clone)]
pub struct Controller<'a> {
    design: &'a LightingDesign,
    room: &'a ValidatedRoom,
    policy: &'a ControlPolicy,
    /// Rule indices in evaluation order.
    order: Vec<usize>,
}

impl<'a> Controller<'a> {
    /// Binds a policy to a design; all zone and fixture references are
    /// resolved here so a simulation never fails mid-run.
    pub fn bind(
        design: &'a LightingDesign,
        room: &'a ValidatedRoom,
        policy: &'a ControlPolicy,
    ) -> Result<Self, ControlError> {
        if !(policy.gain > 0.0) || !policy.gain.is_finite() {
            return Err(ControlError::InvalidPolicy(format!("gain {} must be positive", policy.gain)));
        }
        if let Some(db) = policy.deadband {
            if !(db >= 0.0) {
                return Err(ControlError::InvalidPolicy(format!("deadband {db} must be non-negative")));
            }
        }
        let level_ok = |v: f64| (0.0..=1.0).contains(&v);
        for (rule, r) in policy.rules.iter().enumerate() {
            let zone_check = |zone: &str| {
                if design.zones.contains_key(zone) {
                    Ok(())
                } else {
                    Err(ControlError::UnknownZone {
                        rule,
                        zone: zone.to_string(),
                    })
                }
            };
            let invalid = |reason: String| Err(ControlError::InvalidRule { rule, reason });
            match &r.kind {
                RuleKind::OccupancyOnoff { zone } => zone_check(zone)?,
                RuleKind::ConstantIlluminance { zone, setpoint } => {
                    zone_check(zone)?;
                    if !(*setpoint > 0.0) {
                        return invalid(format!("setpoint {setpoint} must be positive"));
                    }
                }
                RuleKind::BlindControl { daylight_threshold } => {
                    if !(*daylight_threshold >= 0.0) {
                        return invalid("daylight threshold must be non-negative".into());
                    }
                }
                RuleKind::Timing { zone, on_time, off_time } => {
                    zone_check(zone)?;
                    if on_time == off_time {
                        return invalid("on and off times must differ".into());
                    }
                }
                RuleKind::ThresholdTimer {
                    zone,
                    lux_threshold,
                    window_start,
                    window_end,
                } => {
                    zone_check(zone)?;
                    if !(*lux_threshold >= 0.0) {
                        return invalid("lux threshold must be non-negative".into());
                    }
                    if window_start == window_end {
                        return invalid("window start and end must differ".into());
                    }
                }
                RuleKind::Scene { levels, .. } => {
                    for (&fixture, &level) in levels {
                        if fixture >= design.fixtures.len() {
                            return Err(ControlError::UnknownFixture { rule, fixture });
                        }
                        if !level_ok(level) {
                            return invalid(format!("level {level} outside [0, 1]"));
                        }
                    }
                }
                RuleKind::Linkage { zone, dim_on, .. } => {
                    zone_check(zone)?;
                    if let Some(d) = dim_on {
                        if !level_ok(*d) {
                            return invalid(format!("dim_on {d} outside [0, 1]"));
                        }
                    }
                }
            }
        }
        // Surface photometric problems (e.g. a sensor inside a lamp) up front.
        sensor_reading(design, room, policy.sensor_point, &vec![0.0; design.fixtures.len()], 0.0, 0.0)?;

        let mut order: Vec<usize> = (0..policy.rules.len()).collect();
        order.sort_by_key(|&i| policy.rules[i].priority);
        Ok(Self {
            design,
            room,
            policy,
            order,
        })
    }

    pub fn initial_state(&self) -> ControlState {
        ControlState {
            dims: vec![0.0; self.design.fixtures.len()],
            blind_angle: BLIND_OPEN,
            vacant_for: self.design.zones.keys().map(|z| (z.clone(), 0)).collect(),
            linkage_active: BTreeMap::new(),
        }
    }

    pub fn reading(&self, dims: &[f64], blind_angle: f64, daylight: f64) -> f64 {
        sensor_reading(self.design, self.room, self.policy.sensor_point, dims, blind_angle, daylight)
            .expect("checked at bind")
    }

    fn zone(&self, zone: &str) -> &[usize] {
        self.design.zone(zone).unwrap_or_default()
    }

    /// Advances one tick.
    pub fn step(&self, state: &ControlState, inputs: &TickInputs) -> ControlState {
        let reading = self.reading(&state.dims, state.blind_angle, inputs.daylight);
        let transmitted = inputs.daylight * blind_transmission(state.blind_angle);

        let mut next = state.clone();
        for (zone, vacant) in next.vacant_for.iter_mut() {
            *vacant = if inputs.occupied(zone) {
                0
            } else {
                vacant.saturating_add(inputs.dt)
            };
        }

        for &index in &self.order {
            match &self.policy.rules[index].kind {
                RuleKind::OccupancyOnoff { zone } => {
                    if inputs.occupied(zone) {
                        self.set_zone(&mut next.dims, zone, 1.0);
                    } else if next.vacant_for.get(zone).copied().unwrap_or(u32::MAX) > self.policy.occupancy_hold {
                        self.set_zone(&mut next.dims, zone, 0.0);
                    }
                }
                RuleKind::ConstantIlluminance { zone, setpoint } => {
                    let members = self.zone(zone);
                    if !inputs.occupied(zone) {
                        self.set_zone(&mut next.dims, zone, 0.0);
                        continue;
                    }
                    let error = setpoint - reading;
                    let step = if error.abs() <= self.policy.deadband_for(*setpoint) {
                        0.0
                    } else {
                        self.policy.gain * error / setpoint
                    };
                    for &f in members {
                        next.dims[f] = (state.dims[f] + step).clamp(0.0, 1.0);
                    }
                }
                RuleKind::BlindControl { daylight_threshold } => {
                    next.blind_angle = if inputs.daylight > *daylight_threshold {
                        BLIND_CLOSED
                    } else {
                        BLIND_OPEN
                    };
                }
                RuleKind::Timing { zone, on_time, off_time } => {
                    let on = in_daily_window(inputs.minute, *on_time, *off_time);
                    self.set_zone(&mut next.dims, zone, if on { 1.0 } else { 0.0 });
                }
                RuleKind::ThresholdTimer {
                    zone,
                    lux_threshold,
                    window_start,
                    window_end,
                } => {
                    let on = in_daily_window(inputs.minute, *window_start, *window_end)
                        && transmitted < *lux_threshold;
                    self.set_zone(&mut next.dims, zone, if on { 1.0 } else { 0.0 });
                }
                RuleKind::Scene { trigger, levels, .. } => {
                    if inputs.events.contains(trigger) {
                        for (&f, &level) in levels {
                            next.dims[f] = level;
                        }
                    }
                }
                RuleKind::Linkage {
                    trigger,
                    zone,
                    dim_on,
                    off_trigger,
                } => {
                    let was_active = state.linkage_active.get(&index).copied().unwrap_or(false);
                    let mut active = was_active;
                    let mut switched_off = false;
                    for event in &inputs.events {
                        if event == trigger {
                            active = true;
                        } else if Some(event) == off_trigger.as_ref() {
                            active = false;
                            switched_off = true;
                        }
                    }
                    if active {
                        let level = dim_on.unwrap_or(if *trigger == EventKind::NightWake {
                            NIGHT_LIGHT_LEVEL
                        } else {
                            1.0
                        });
                        self.set_zone(&mut next.dims, zone, level);
                    } else if switched_off {
                        self.set_zone(&mut next.dims, zone, 0.0);
                    }
                    next.linkage_active.insert(index, active);
                }
            }
        }

        for (dim, fixture) in next.dims.iter_mut().zip(&self.design.fixtures) {
            if !fixture.dimmable && *dim > 0.0 {
                *dim = 1.0;
            }
        }
        next
    }

    fn set_zone(&self, dims: &mut [f64], zone: &str, level: f64) {
        for &f in self.zone(zone) {
            dims[f] = level;
        }
    }

    /// Runs the whole schedule.
    pub fn run(&self, schedule: &Schedule) -> Result<SimulationTrace, ControlError> {
        schedule.validate()?;
        let fixtures = &self.design.fixtures;
        let mut zones: Vec<String> = self.design.zones.keys().cloned().collect();
        for zone in schedule.occupancy.keys() {
            if !zones.contains(zone) {
                zones.push(zone.clone());
            }
        }
        zones.sort();

        let mut events_by_tick: BTreeMap<u32, Vec<EventKind>> = BTreeMap::new();
        for e in &schedule.events {
            events_by_tick
                .entry(e.minute / schedule.dt)
                .or_default()
                .push(e.event.clone());
        }

        let hours = f64::from(schedule.dt) / 60.0;
        let mut fixture_energy_wh = vec![0.0; fixtures.len()];
        let mut state = self.initial_state();
        let mut ticks = Vec::with_capacity(schedule.ticks() as usize);
        for tick in 0..schedule.ticks() {
            let minute = tick * schedule.dt;
            let inputs = TickInputs {
                minute,
                dt: schedule.dt,
                occupied: zones
                    .iter()
                    .map(|z| (z.clone(), schedule.is_occupied(z, minute)))
                    .collect(),
                daylight: schedule.daylight_at(f64::from(minute)),
                events: events_by_tick.remove(&tick).unwrap_or_default(),
            };
            state = self.step(&state, &inputs);
            for ((energy, fixture), dim) in fixture_energy_wh.iter_mut().zip(fixtures).zip(&state.dims) {
                *energy += fixture.spec.power * dim * hours;
            }
            ticks.push(TickRecord {
                tick,
                time: minute,
                dims: state.dims.clone(),
                blind_angle: state.blind_angle,
                sensor_lux: self.reading(&state.dims, state.blind_angle, inputs.daylight),
                occupied: inputs.occupied,
                events: inputs.events,
            });
        }
        Ok(SimulationTrace {
            design_id: self.design.id.clone(),
            dt: schedule.dt,
            fixture_zones: fixtures.iter().map(|f| f.zone.clone()).collect(),
            fixture_power: fixtures.iter().map(|f| f.spec.power).collect(),
            energy_wh: fixture_energy_wh.iter().sum(),
            fixture_energy_wh,
            ticks,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickRecord {
    pub tick: u32,
    /// Minute since the start of the run.
    pub time: u32,
    pub dims: Vec<f64>,
    pub blind_angle: f64,
    /// Sensor reading after this tick's actuation.
    pub sensor_lux: f64,
    pub occupied: BTreeMap<String, bool>,
    pub events: Vec<EventKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub design_id: String,
    pub dt: u32,
    pub fixture_zones: Vec<String>,
    pub fixture_power: Vec<f64>,
    pub energy_wh: f64,
    pub fixture_energy_wh: Vec<f64>,
    pub ticks: Vec<TickRecord>,
}

impl SimulationTrace {
    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ticks.is_empty()
    }

    /// Energy used up to and including `tick`, Wh.
    pub fn energy_through(&self, tick: usize) -> f64 {
        let hours = f64::from(self.dt) / 60.0;
        self.ticks[..=tick.min(self.ticks.len().saturating_sub(1))]
            .iter()
            .map(|t| t.dims.iter().zip(&self.fixture_power).map(|(d, p)| p * d * hours).sum::<f64>())
            .sum()
    }

    /// Checks the structural invariants of a stored trace.
    pub fn check(&self) -> Result<(), String> {
        let n = self.fixture_power.len();
        if self.fixture_zones.len() != n || self.fixture_energy_wh.len() != n {
            return Err("per-fixture vectors disagree in length".into());
        }
        for (i, t) in self.ticks.iter().enumerate() {
            if t.tick as usize != i || t.dims.len() != n {
                return Err(format!("tick {i} is malformed"));
            }
            if t.dims.iter().any(|d| !(0.0..=1.0).contains(d)) || !(0.0..=BLIND_CLOSED).contains(&t.blind_angle) {
                return Err(format!("tick {i} has out-of-range actuation"));
            }
        }
        if !(self.energy_wh >= 0.0) {
            return Err("negative energy".into());
        }
        Ok(())
    }

    pub fn summary(&self) -> TraceSummary {
        TraceSummary {
            design_id: self.design_id.clone(),
            ticks: self.ticks.len(),
            dt: self.dt,
            energy_wh: self.energy_wh,
            fixture_energy_wh: self.fixture_energy_wh.clone(),
        }
    }

    /// One row per tick and fixture, followed by a per-fixture energy block.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tick,time,fixture_id,dim,blind_angle,sensor_lux,occupied,event\n");
        for t in &self.ticks {
            let events: Vec<String> = t.events.iter().map(ToString::to_string).collect();
            let events = events.join(";");
            if self.fixture_power.is_empty() {
                let _ = writeln!(out, "{},{},,,{},{},,{}", t.tick, t.time, t.blind_angle, t.sensor_lux, events);
                continue;
            }
            for (f, dim) in t.dims.iter().enumerate() {
                let occupied = t.occupied.get(&self.fixture_zones[f]).copied().unwrap_or(false);
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    t.tick,
                    t.time,
                    f,
                    dim,
                    t.blind_angle,
                    t.sensor_lux,
                    u8::from(occupied),
                    events
                );
            }
        }
        out.push_str("\n# summary\nfixture_id,energy_wh\n");
        for (f, wh) in self.fixture_energy_wh.iter().enumerate() {
            let _ = writeln!(out, "{f},{wh}");
        }
        let _ = writeln!(out, "total,{}", self.energy_wh);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub design_id: String,
    pub ticks: usize,
    pub dt: u32,
    pub energy_wh: f64,
    pub fixture_energy_wh: Vec<f64>,
}

/// Binds and runs a policy over a schedule.
pub fn simulate(
    design: &LightingDesign,
    room: &ValidatedRoom,
    policy: &ControlPolicy,
    schedule: &Schedule,
) -> Result<SimulationTrace, ControlError> {
    Controller::bind(design, room, policy)?.run(schedule)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedPolicy {
    pub name: String,
    pub policy: ControlPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavingsEntry {
    pub name: String,
    pub energy_wh: f64,
    pub savings_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavingsReport {
    pub baseline: String,
    pub entries: Vec<SavingsEntry>,
}

impl SavingsReport {
    /// Fixed-width table for terminals.
    pub fn to_table(&self) -> String {
        let width = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(0).max(6);
        let mut out = format!("{:<width$}  {:>12}  {:>8}\n", "policy", "energy_wh", "savings");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{:<width$}  {:>12.3}  {:>7.1}%",
                e.name, e.energy_wh, e.savings_percent
            );
        }
        out
    }
}

/// Energy of each policy against the first one.
pub fn compare_policies(
    design: &LightingDesign,
    room: &ValidatedRoom,
    policies: &[NamedPolicy],
    schedule: &Schedule,
) -> Result<SavingsReport, ControlError> {
    if policies.len() < 2 {
        return Err(ControlError::NotEnoughPolicies);
    }
    let energies = policies
        .iter()
        .map(|p| simulate(design, room, &p.policy, schedule).map(|t| t.energy_wh))
        .collect::<Result<Vec<_>, _>>()?;
    let baseline = energies[0];
    if !(baseline > 0.0) {
        return Err(ControlError::ZeroBaselineEnergy(policies[0].name.clone()));
    }
    Ok(SavingsReport {
        baseline: policies[0].name.clone(),
        entries: policies
            .iter()
            .zip(energies)
            .map(|(p, wh)| SavingsEntry {
                name: p.name.clone(),
                energy_wh: wh,
                savings_percent: 100.0 * (1.0 - wh / baseline),
            })
            .collect(),
    })
}
