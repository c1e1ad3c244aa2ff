//! JSON interchange for images, maps, homotopies, paths and certificates.
//!
//! Coordinates and counts are JSON integers; rational times are `"num/den"`
//! strings. Syntax and type errors carry the JSON path and the line and
//! column; semantic errors (a point outside its image, a map that is not
//! total) carry the path of the offending value.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::constructions::Certificate;
use crate::ecpath::{ECHomotopy, ECPath, EndpointPolicy};
use crate::error::{Error, Result};
use crate::homotopy::{EquivalenceCertificate, Homotopy};
use crate::lattice::{AdjacencyKind, DigitalImage, Point, PointedImage};
use crate::longhtpy::{LHomotopy, LongEquivalenceCertificate, LongHomotopy};
use crate::maps::DigitalMap;
use crate::realhtpy::{RealEquivalenceCertificate, RealHomotopy};
use crate::scalar::{format_time, parse_time, Coord, TimeInt};
use crate::similarity::{Filtration, Restrictions, SimilarityCertificate};

/// Reading and writing one interchange format.
pub trait Json: Sized {
    fn to_json(&self) -> String;
    fn from_json(text: &str) -> Result<Self>;
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema { path, message: e.into_inner().to_string() }
    })?;
    Ok(value)
}

fn render<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("interchange types always serialize")
}

fn at(path: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Schema { .. } => e,
        other => Error::Schema { path: path.trim_start_matches('.').to_string(), message: other.to_string() },
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
struct ImageFile<C> {
    dim: usize,
    u: usize,
    points: Vec<Vec<C>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basepoint: Option<Vec<C>>,
}

#[derive(Serialize, Deserialize)]
struct MapFile<C> {
    domain: ImageFile<C>,
    codomain: ImageFile<C>,
    pairs: Vec<(Vec<C>, Vec<C>)>,
}

#[derive(Serialize, Deserialize)]
struct HomotopyFile<C> {
    layers: Vec<MapFile<C>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pointed_at: Option<Vec<C>>,
}

#[derive(Serialize, Deserialize)]
struct LHomotopyFile<C> {
    layers: Vec<MapFile<C>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stab: Option<Vec<(Vec<C>, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pointed_at: Option<Vec<C>>,
}

#[derive(Serialize, Deserialize)]
struct LongFile<C> {
    t_min: i64,
    layers: Vec<MapFile<C>>,
    bounds: Vec<(Vec<C>, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pointed_at: Option<Vec<C>>,
}

#[derive(Serialize, Deserialize)]
struct RealFile<C> {
    jumps: Vec<String>,
    at0: MapFile<C>,
    open: Vec<MapFile<C>>,
    atjump: Vec<MapFile<C>>,
    at1: MapFile<C>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pointed_at: Option<Vec<C>>,
}

#[derive(Serialize, Deserialize)]
struct PathFile<C> {
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<ImageFile<C>>,
    prefix: Vec<Vec<C>>,
    tail: Vec<C>,
}

#[derive(Serialize, Deserialize)]
struct RowFile<C> {
    prefix: Vec<Vec<C>>,
    tail: Vec<C>,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "kebab-case")]
enum PolicyFile {
    Free,
    EndpointsFixed,
}

#[derive(Serialize, Deserialize)]
struct ECHomotopyFile<C> {
    image: ImageFile<C>,
    policy: PolicyFile,
    rows: Vec<RowFile<C>>,
}

#[derive(Serialize, Deserialize)]
struct PlainFile<C> {
    f: MapFile<C>,
    g: MapFile<C>,
    h: HomotopyFile<C>,
    k: HomotopyFile<C>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basepoints: Option<(Vec<C>, Vec<C>)>,
}

#[derive(Serialize, Deserialize)]
struct LongCertFile<C> {
    f: MapFile<C>,
    g: MapFile<C>,
    h: LongFile<C>,
    k: LongFile<C>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basepoints: Option<(Vec<C>, Vec<C>)>,
}

#[derive(Serialize, Deserialize)]
struct RealCertFile<C> {
    f: MapFile<C>,
    g: MapFile<C>,
    h: RealFile<C>,
    k: RealFile<C>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basepoints: Option<(Vec<C>, Vec<C>)>,
}

#[derive(Serialize, Deserialize)]
struct FiltrationFile<C> {
    levels: Vec<ImageFile<C>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tag: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct RestrictionFile<C> {
    v: usize,
    w: usize,
    homotopy: HomotopyFile<C>,
}

#[derive(Serialize, Deserialize)]
struct SimilarityFile<C> {
    x_levels: FiltrationFile<C>,
    y_levels: FiltrationFile<C>,
    f: Vec<MapFile<C>>,
    g: Vec<MapFile<C>>,
    h: Vec<HomotopyFile<C>>,
    k: Vec<HomotopyFile<C>>,
    rf: Vec<RestrictionFile<C>>,
    rg: Vec<RestrictionFile<C>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basepoints: Option<(Vec<C>, Vec<C>)>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
enum CertificateFile<C> {
    Equivalence(PlainFile<C>),
    Long(LongCertFile<C>),
    Real(RealCertFile<C>),
    Similarity(SimilarityFile<C>),
}

/// Converts files to values, sharing one instance per distinct image.
struct Decoder<C: Coord> {
    images: Vec<(ImageFile<C>, DigitalImage<C>)>,
}

impl<C: Coord> Decoder<C> {
    fn new() -> Self {
        Decoder { images: Vec::new() }
    }

    fn point(&self, coords: &[C], path: &str) -> Result<Point<C>> {
        Point::new(coords.to_vec()).map_err(at(path))
    }

    fn image(&mut self, f: &ImageFile<C>, path: &str) -> Result<DigitalImage<C>> {
        let key = ImageFile { basepoint: None, ..f.clone() };
        if let Some((_, img)) = self.images.iter().find(|(k, _)| *k == key) {
            return Ok(img.clone());
        }
        let kind = AdjacencyKind::new(f.dim, f.u).map_err(at(path))?;
        let points = f
            .points
            .iter()
            .enumerate()
            .map(|(i, c)| self.point(c, &format!("{path}.points[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let img = DigitalImage::new_strict(kind, points).map_err(at(&format!("{path}.points")))?;
        if let Some(b) = &f.basepoint {
            img.require_index(&self.point(b, path)?).map_err(at(&format!("{path}.basepoint")))?;
        }
        self.images.push((key, img.clone()));
        Ok(img)
    }

    fn opt_point(&self, p: &Option<Vec<C>>, path: &str) -> Result<Option<Point<C>>> {
        p.as_ref().map(|c| self.point(c, path)).transpose()
    }

    fn map(&mut self, f: &MapFile<C>, path: &str) -> Result<DigitalMap<C>> {
        let dom = self.image(&f.domain, &format!("{path}.domain"))?;
        let cod = self.image(&f.codomain, &format!("{path}.codomain"))?;
        let pairs = f
            .pairs
            .iter()
            .map(|(x, y)| Ok((self.point(x, path)?, self.point(y, path)?)))
            .collect::<Result<Vec<_>>>()?;
        DigitalMap::from_pairs(&dom, &cod, &pairs).map_err(at(&format!("{path}.pairs")))
    }

    fn maps(&mut self, fs: &[MapFile<C>], path: &str) -> Result<Vec<DigitalMap<C>>> {
        fs.iter().enumerate().map(|(i, m)| self.map(m, &format!("{path}[{i}]"))).collect()
    }

    fn homotopy(&mut self, f: &HomotopyFile<C>, path: &str) -> Result<Homotopy<C>> {
        let layers = self.maps(&f.layers, &format!("{path}.layers"))?;
        let pin = self.opt_point(&f.pointed_at, path)?;
        Homotopy::new(layers, pin).map_err(at(path))
    }

    fn per_point(&self, dom: &DigitalImage<C>, entries: &[(Vec<C>, usize)], path: &str) -> Result<Vec<usize>> {
        let mut out = vec![None; dom.len()];
        for (i, (x, n)) in entries.iter().enumerate() {
            let p = format!("{path}[{i}]");
            let j = dom.require_index(&self.point(x, &p)?).map_err(at(&p))?;
            if out[j].replace(*n).is_some() {
                return Err(Error::Schema { path: p, message: format!("{} listed twice", dom.point(j)) });
            }
        }
        out.into_iter()
            .enumerate()
            .map(|(j, v)| {
                v.ok_or_else(|| Error::Schema {
                    path: path.to_string(),
                    message: format!("no entry for {}", dom.point(j)),
                })
            })
            .collect()
    }

    fn l_homotopy(&mut self, f: &LHomotopyFile<C>, path: &str) -> Result<LHomotopy<C>> {
        let layers = self.maps(&f.layers, &format!("{path}.layers"))?;
        let pin = self.opt_point(&f.pointed_at, path)?;
        match &f.stab {
            None => LHomotopy::with_exact_stab(layers, pin).map_err(at(path)),
            Some(s) => {
                let dom = layers
                    .first()
                    .map(|l| l.domain().clone())
                    .ok_or_else(|| Error::Schema { path: format!("{path}.layers"), message: "no layers".into() })?;
                let stab = self.per_point(&dom, s, &format!("{path}.stab"))?;
                LHomotopy::new(layers, stab, pin).map_err(at(path))
            }
        }
    }

    fn long(&mut self, f: &LongFile<C>, path: &str) -> Result<LongHomotopy<C>> {
        let layers = self.maps(&f.layers, &format!("{path}.layers"))?;
        let expected = -((layers.len() as i64 - 1) / 2);
        if f.t_min != expected {
            return Err(Error::Schema {
                path: format!("{path}.t_min"),
                message: format!("{} layers need t_min = {expected}, found {}", layers.len(), f.t_min),
            });
        }
        let dom = layers
            .first()
            .map(|l| l.domain().clone())
            .ok_or_else(|| Error::Schema { path: format!("{path}.layers"), message: "no layers".into() })?;
        let bounds = self.per_point(&dom, &f.bounds, &format!("{path}.bounds"))?;
        let pin = self.opt_point(&f.pointed_at, path)?;
        LongHomotopy::new(layers, bounds, pin).map_err(at(path))
    }

    fn real<I: TimeInt>(&mut self, f: &RealFile<C>, path: &str) -> Result<RealHomotopy<C, I>> {
        let jumps = f
            .jumps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_time::<I>(s).ok_or_else(|| Error::Schema {
                    path: format!("{path}.jumps[{i}]"),
                    message: format!("{s:?} is not a \"num/den\" rational"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let at0 = self.map(&f.at0, &format!("{path}.at0"))?;
        let open = self.maps(&f.open, &format!("{path}.open"))?;
        let atjump = self.maps(&f.atjump, &format!("{path}.atjump"))?;
        let at1 = self.map(&f.at1, &format!("{path}.at1"))?;
        let pin = self.opt_point(&f.pointed_at, path)?;
        RealHomotopy::new(jumps, at0, open, atjump, at1, pin).map_err(at(path))
    }

    fn row(&self, image: &DigitalImage<C>, prefix: &[Vec<C>], tail: &[C], path: &str) -> Result<ECPath<C>> {
        let prefix = prefix.iter().map(|c| self.point(c, path)).collect::<Result<Vec<_>>>()?;
        ECPath::new(image, &prefix, &self.point(tail, path)?).map_err(at(path))
    }

    fn basepoints(&self, b: &Option<(Vec<C>, Vec<C>)>) -> Result<Option<(Point<C>, Point<C>)>> {
        b.as_ref().map(|(x, y)| Ok((self.point(x, "basepoints[0]")?, self.point(y, "basepoints[1]")?))).transpose()
    }

    fn plain(&mut self, f: &PlainFile<C>) -> Result<EquivalenceCertificate<C>> {
        Ok(EquivalenceCertificate {
            f: self.map(&f.f, "f")?,
            g: self.map(&f.g, "g")?,
            h: self.homotopy(&f.h, "h")?,
            k: self.homotopy(&f.k, "k")?,
            basepoints: self.basepoints(&f.basepoints)?,
        })
    }

    fn long_cert(&mut self, f: &LongCertFile<C>) -> Result<LongEquivalenceCertificate<C>> {
        Ok(LongEquivalenceCertificate {
            f: self.map(&f.f, "f")?,
            g: self.map(&f.g, "g")?,
            h: self.long(&f.h, "h")?,
            k: self.long(&f.k, "k")?,
            basepoints: self.basepoints(&f.basepoints)?,
        })
    }

    fn real_cert<I: TimeInt>(&mut self, f: &RealCertFile<C>) -> Result<RealEquivalenceCertificate<C, I>> {
        Ok(RealEquivalenceCertificate {
            f: self.map(&f.f, "f")?,
            g: self.map(&f.g, "g")?,
            h: self.real(&f.h, "h")?,
            k: self.real(&f.k, "k")?,
            basepoints: self.basepoints(&f.basepoints)?,
        })
    }

    fn filtration(&mut self, f: &FiltrationFile<C>, path: &str) -> Result<Filtration<C>> {
        let levels = f
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| self.image(l, &format!("{path}.levels[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Filtration::new(levels, f.tag.clone()).map_err(at(path))
    }

    fn restrictions(&mut self, rs: &[RestrictionFile<C>], path: &str) -> Result<Restrictions<C>> {
        let mut out = BTreeMap::new();
        for (i, r) in rs.iter().enumerate() {
            let p = format!("{path}[{i}]");
            if r.v >= r.w {
                return Err(Error::Schema {
                    path: p,
                    message: format!("restriction key ({}, {}) needs v < w", r.v, r.w),
                });
            }
            let h = self.homotopy(&r.homotopy, &format!("{p}.homotopy"))?;
            if out.insert((r.v, r.w), h).is_some() {
                return Err(Error::Schema { path: p, message: format!("restriction ({}, {}) listed twice", r.v, r.w) });
            }
        }
        Ok(out)
    }

    fn similarity(&mut self, f: &SimilarityFile<C>) -> Result<SimilarityCertificate<C>> {
        let h = f.h.iter().enumerate().map(|(i, h)| self.homotopy(h, &format!("h[{i}]"))).collect::<Result<_>>()?;
        let k = f.k.iter().enumerate().map(|(i, h)| self.homotopy(h, &format!("k[{i}]"))).collect::<Result<_>>()?;
        Ok(SimilarityCertificate {
            x_levels: self.filtration(&f.x_levels, "x_levels")?,
            y_levels: self.filtration(&f.y_levels, "y_levels")?,
            f: self.maps(&f.f, "f")?,
            g: self.maps(&f.g, "g")?,
            h,
            k,
            rf: self.restrictions(&f.rf, "rf")?,
            rg: self.restrictions(&f.rg, "rg")?,
            basepoints: self.basepoints(&f.basepoints)?,
        })
    }
}

fn coords<C: Coord>(p: &Point<C>) -> Vec<C> {
    p.coords().to_vec()
}

fn image_file<C: Coord>(img: &DigitalImage<C>, basepoint: Option<&Point<C>>) -> ImageFile<C> {
    ImageFile {
        dim: img.dim(),
        u: img.kind().u(),
        points: img.points().iter().map(coords).collect(),
        basepoint: basepoint.map(coords),
    }
}

fn map_file<C: Coord>(m: &DigitalMap<C>) -> MapFile<C> {
    MapFile {
        domain: image_file(m.domain(), None),
        codomain: image_file(m.codomain(), None),
        pairs: m.pairs().map(|(x, y)| (coords(x), coords(y))).collect(),
    }
}

fn homotopy_file<C: Coord>(h: &Homotopy<C>) -> HomotopyFile<C> {
    HomotopyFile { layers: h.layers().iter().map(map_file).collect(), pointed_at: h.pointed_at().map(coords) }
}

fn per_point_file<C: Coord>(dom: &DigitalImage<C>, values: &[usize]) -> Vec<(Vec<C>, usize)> {
    dom.points().iter().zip(values).map(|(p, &n)| (coords(p), n)).collect()
}

fn long_file<C: Coord>(h: &LongHomotopy<C>) -> LongFile<C> {
    LongFile {
        t_min: h.t_min(),
        layers: h.layers().iter().map(map_file).collect(),
        bounds: per_point_file(h.domain(), h.bounds()),
        pointed_at: h.pointed_at().map(coords),
    }
}

fn real_file<C: Coord, I: TimeInt>(h: &RealHomotopy<C, I>) -> RealFile<C> {
    RealFile {
        jumps: h.jumps().iter().map(format_time).collect(),
        at0: map_file(h.at0()),
        open: h.open_layers().iter().map(map_file).collect(),
        atjump: h.jump_layers().iter().map(map_file).collect(),
        at1: map_file(h.at1()),
        pointed_at: h.pointed_at().map(coords),
    }
}

fn basepoints_file<C: Coord>(b: &Option<(Point<C>, Point<C>)>) -> Option<(Vec<C>, Vec<C>)> {
    b.as_ref().map(|(x, y)| (coords(x), coords(y)))
}

fn plain_file<C: Coord>(c: &EquivalenceCertificate<C>) -> PlainFile<C> {
    PlainFile {
        f: map_file(&c.f),
        g: map_file(&c.g),
        h: homotopy_file(&c.h),
        k: homotopy_file(&c.k),
        basepoints: basepoints_file(&c.basepoints),
    }
}

fn long_cert_file<C: Coord>(c: &LongEquivalenceCertificate<C>) -> LongCertFile<C> {
    LongCertFile {
        f: map_file(&c.f),
        g: map_file(&c.g),
        h: long_file(&c.h),
        k: long_file(&c.k),
        basepoints: basepoints_file(&c.basepoints),
    }
}

fn real_cert_file<C: Coord, I: TimeInt>(c: &RealEquivalenceCertificate<C, I>) -> RealCertFile<C> {
    RealCertFile {
        f: map_file(&c.f),
        g: map_file(&c.g),
        h: real_file(&c.h),
        k: real_file(&c.k),
        basepoints: basepoints_file(&c.basepoints),
    }
}

fn filtration_file<C: Coord>(f: &Filtration<C>) -> FiltrationFile<C> {
    FiltrationFile {
        levels: f.levels().iter().map(|l| image_file(l, None)).collect(),
        tag: f.tag().map(str::to_string),
    }
}

fn restriction_files<C: Coord>(rs: &Restrictions<C>) -> Vec<RestrictionFile<C>> {
    rs.iter().map(|(&(v, w), h)| RestrictionFile { v, w, homotopy: homotopy_file(h) }).collect()
}

fn similarity_file<C: Coord>(c: &SimilarityCertificate<C>) -> SimilarityFile<C> {
    SimilarityFile {
        x_levels: filtration_file(&c.x_levels),
        y_levels: filtration_file(&c.y_levels),
        f: c.f.iter().map(map_file).collect(),
        g: c.g.iter().map(map_file).collect(),
        h: c.h.iter().map(homotopy_file).collect(),
        k: c.k.iter().map(homotopy_file).collect(),
        rf: restriction_files(&c.rf),
        rg: restriction_files(&c.rg),
        basepoints: basepoints_file(&c.basepoints),
    }
}

impl<C: Coord> Json for DigitalImage<C> {
    fn to_json(&self) -> String {
        render(&image_file(self, None))
    }

    fn from_json(text: &str) -> Result<Self> {
        Decoder::new().image(&parse(text)?, "")
    }
}

impl<C: Coord> Json for PointedImage<C> {
    fn to_json(&self) -> String {
        render(&image_file(self.image(), Some(self.basepoint())))
    }

    fn from_json(text: &str) -> Result<Self> {
        let (image, b) = image_with_basepoint(text)?;
        let b = b.ok_or_else(|| Error::Schema { path: "basepoint".into(), message: "missing basepoint".into() })?;
        PointedImage::new(image, b).map_err(at("basepoint"))
    }
}

/// An image file together with its optional basepoint.
pub fn image_with_basepoint<C: Coord>(text: &str) -> Result<(DigitalImage<C>, Option<Point<C>>)> {
    let f: ImageFile<C> = parse(text)?;
    let mut d = Decoder::new();
    let image = d.image(&f, "")?;
    Ok((image, d.opt_point(&f.basepoint, "basepoint")?))
}

impl<C: Coord> Json for DigitalMap<C> {
    fn to_json(&self) -> String {
        render(&map_file(self))
    }

    fn from_json(text: &str) -> Result<Self> {
        Decoder::new().map(&parse(text)?, "")
    }
}

impl<C: Coord> Json for Homotopy<C> {
    fn to_json(&self) -> String {
        render(&homotopy_file(self))
    }

    fn from_json(text: &str) -> Result<Self> {
        Decoder::new().homotopy(&parse(text)?, "")
    }
}

impl<C: Coord> Json for LHomotopy<C> {
    fn to_json(&self) -> String {
        render(&LHomotopyFile {
            layers: self.layers().iter().map(map_file).collect(),
            stab: Some(per_point_file(self.domain(), self.stab())),
            pointed_at: self.pointed_at().map(coords),
        })
    }

    fn from_json(text: &str) -> Result<Self> {
        Decoder::new().l_homotopy(&parse(text)?, "")
    }
}

impl<C: Coord> Json for LongHomotopy<C> {
    fn to_json(&self) -> String {
        render(&long_file(self))
    }

    fn from_json(text: &str) -> Result<Self> {
        Decoder::new().long(&parse(text)?, "")
    }
}

impl<C: Coord, I: TimeInt> Json for RealHomotopy<C, I> {
    fn to_json(&self) -> String {
        render(&real_file(self))
    }

    fn from_json(text: &str) -> Result<Self> {
        Decoder::new().real(&parse(text)?, "")
    }
}

impl<C: Coord> Json for ECPath<C> {
    fn to_json(&self) -> String {
        render(&PathFile {
            image: Some(image_file(self.image(), None)),
            prefix: self.prefix_points().iter().map(coords).collect(),
            tail: coords(self.tail_point()),
        })
    }

    fn from_json(text: &str) -> Result<Self> {
        ecpath_from_json(text, None)
    }
}

/// Reads an EC path. The image comes from the file's `image` field or,
/// when the file has none, from `image`.
pub fn ecpath_from_json<C: Coord>(text: &str, image: Option<&DigitalImage<C>>) -> Result<ECPath<C>> {
    let f: PathFile<C> = parse(text)?;
    let mut d = Decoder::new();
    let image = match (&f.image, image) {
        (Some(i), _) => d.image(i, "image")?,
        (None, Some(i)) => i.clone(),
        (None, None) => {
            return Err(Error::Schema { path: "image".into(), message: "the path file names no image".into() })
        }
    };
    d.row(&image, &f.prefix, &f.tail, "")
}

impl<C: Coord> Json for ECHomotopy<C> {
    fn to_json(&self) -> String {
        let image = self.rows.first().map(|r| image_file(r.image(), None)).unwrap_or(ImageFile {
            dim: 1,
            u: 1,
            points: Vec::new(),
            basepoint: None,
        });
        render(&ECHomotopyFile {
            image,
            policy: match self.policy {
                EndpointPolicy::Free => PolicyFile::Free,
                EndpointPolicy::EndpointsFixed => PolicyFile::EndpointsFixed,
            },
            rows: self
                .rows
                .iter()
                .map(|r| RowFile {
                    prefix: r.prefix_points().iter().map(coords).collect(),
                    tail: coords(r.tail_point()),
                })
                .collect(),
        })
    }

    fn from_json(text: &str) -> Result<Self> {
        let f: ECHomotopyFile<C> = parse(text)?;
        let mut d = Decoder::new();
        let image = d.image(&f.image, "image")?;
        let rows = f
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| d.row(&image, &r.prefix, &r.tail, &format!("rows[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let policy = match f.policy {
            PolicyFile::Free => EndpointPolicy::Free,
            PolicyFile::EndpointsFixed => EndpointPolicy::EndpointsFixed,
        };
        Ok(ECHomotopy { rows, policy })
    }
}

impl<C: Coord, I: TimeInt> Json for Certificate<C, I> {
    fn to_json(&self) -> String {
        render(&match self {
            Certificate::Plain(c) => CertificateFile::Equivalence(plain_file(c)),
            Certificate::Long(c) => CertificateFile::Long(long_cert_file(c)),
            Certificate::Real(c) => CertificateFile::Real(real_cert_file(c)),
            Certificate::Similarity(c) => CertificateFile::Similarity(similarity_file(c)),
        })
    }

    fn from_json(text: &str) -> Result<Self> {
        let mut d = Decoder::new();
        Ok(match parse::<CertificateFile<C>>(text)? {
            CertificateFile::Equivalence(f) => Certificate::Plain(d.plain(&f)?),
            CertificateFile::Long(f) => Certificate::Long(d.long_cert(&f)?),
            CertificateFile::Real(f) => Certificate::Real(d.real_cert(&f)?),
            CertificateFile::Similarity(f) => Certificate::Similarity(d.similarity(&f)?),
        })
    }
}

macro_rules! certificate_json {
    ($ty:ident < $($g:ident),* >, $variant:ident) => {
        impl<C: Coord $(, $g: TimeInt)*> Json for $ty<C $(, $g)*> {
            fn to_json(&self) -> String {
                Certificate::<C, certificate_json!(@time $($g)*)>::$variant(self.clone()).to_json()
            }

            fn from_json(text: &str) -> Result<Self> {
                match Certificate::<C, certificate_json!(@time $($g)*)>::from_json(text)? {
                    Certificate::$variant(c) => Ok(c),
                    other => Err(Error::Schema {
                        path: "kind".into(),
                        message: format!("expected a {} certificate, found {}", stringify!($variant).to_lowercase(), other.kind()),
                    }),
                }
            }
        }
    };
    ($ty:ident, $variant:ident) => {
        certificate_json!($ty<>, $variant);
    };
    (@time) => { i64 };
    (@time $g:ident) => { $g };
}

certificate_json!(EquivalenceCertificate, Plain);
certificate_json!(LongEquivalenceCertificate, Long);
certificate_json!(RealEquivalenceCertificate<I>, Real);
certificate_json!(SimilarityCertificate, Similarity);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cube_similarity, t_image_long, tree_equivalence, TreeImage};
    use crate::lattice::interval;
    use num_bigint::BigInt;

    fn pt(c: &[i64]) -> Point<i64> {
        Point::from_i64s(c)
    }

    fn equiv() -> EquivalenceCertificate<i64> {
        tree_equivalence(&TreeImage::new(interval(0, 3).unwrap(), pt(&[1])).unwrap()).unwrap()
    }

    #[test]
    fn image_round_trip_and_errors() {
        let img = interval::<i64>(-1, 2).unwrap();
        assert_eq!(DigitalImage::<i64>::from_json(&img.to_json()).unwrap(), img);
        let dup = r#"{"dim": 1, "u": 1, "points": [[0], [1], [0]]}"#;
        assert!(matches!(DigitalImage::<i64>::from_json(dup), Err(Error::Schema { path, .. }) if path == "points"));
        let float = r#"{"dim": 1, "u": 1, "points": [[0], [1.5]]}"#;
        match DigitalImage::<i64>::from_json(float) {
            Err(Error::Schema { path, message }) => {
                assert_eq!(path, "points[1][0]");
                assert!(message.contains("line 1"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let (_, b) = image_with_basepoint::<i64>(r#"{"dim":1,"u":1,"points":[[0],[1]],"basepoint":[1]}"#).unwrap();
        assert_eq!(b, Some(pt(&[1])));
    }

    #[test]
    fn map_pairs_must_cover() {
        let text = r#"{"domain":{"dim":1,"u":1,"points":[[0],[1]]},"codomain":{"dim":1,"u":1,"points":[[0]]},"pairs":[[[0],[0]]]}"#;
        assert!(matches!(DigitalMap::<i64>::from_json(text), Err(Error::Schema { path, .. }) if path == "pairs"));
    }

    #[test]
    fn homotopies_round_trip() {
        let e = equiv();
        let h = Homotopy::<i64>::from_json(&e.h.to_json()).unwrap();
        assert_eq!(h, e.h);
        assert!(h.layers().iter().all(|l| l.domain().same_as(h.domain())));
        let long = crate::longhtpy::finite_to_long(&e.h);
        assert_eq!(LongHomotopy::<i64>::from_json(&long.to_json()).unwrap(), long);
        let real = crate::realhtpy::finite_to_real::<i64, BigInt>(&e.h);
        let text = real.to_json();
        assert!(!real.jumps().is_empty());
        assert!(real.jumps().iter().all(|q| text.contains(&format!("\"{}\"", format_time(q)))));
        assert_eq!(RealHomotopy::<i64, BigInt>::from_json(&text).unwrap(), real);
        let l = crate::constructions::cube_contraction(&pt(&[0, 0]), 1, AdjacencyKind::c1(2)).unwrap();
        assert_eq!(LHomotopy::<i64>::from_json(&l.to_json()).unwrap(), l);
    }

    #[test]
    fn certificates_round_trip() {
        let e = equiv();
        assert_eq!(EquivalenceCertificate::<i64>::from_json(&e.to_json()).unwrap(), e);
        let l = t_image_long::<i64>(2).unwrap();
        assert_eq!(LongEquivalenceCertificate::<i64>::from_json(&l.to_json()).unwrap(), l);
        let s = cube_similarity(&pt(&[0]), AdjacencyKind::c1(1), 3).unwrap();
        let back = SimilarityCertificate::<i64>::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.verify(), Ok(()));
        let wrong = LongEquivalenceCertificate::<i64>::from_json(&e.to_json());
        assert!(matches!(wrong, Err(Error::Schema { path, .. }) if path == "kind"));
    }

    #[test]
    fn paths_need_an_image() {
        let img = interval::<i64>(0, 2).unwrap();
        let p = ECPath::new(&img, &[pt(&[0]), pt(&[1])], &pt(&[2])).unwrap();
        assert_eq!(ECPath::<i64>::from_json(&p.to_json()).unwrap(), p);
        let bare = r#"{"prefix": [[0], [1]], "tail": [2]}"#;
        assert!(ECPath::<i64>::from_json(bare).is_err());
        assert_eq!(ecpath_from_json(bare, Some(&img)).unwrap(), p);
    }
}
