#!/usr/bin/env python3
"""Regenerates the files under fixtures/ deterministically."""
import json
import os

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")

GEE = "Google Earth Engine"
ARCGIS = "ArcGIS API for Python"
GDAL = "Python GDAL"
RRASTER = "R - Raster package"
FOLIUM = "Python - Folium"
PIE = "PIE Engine"

ANNOTATION_CREATED = "2025-01-01T00:00:00Z"


def dump(path, obj):
    full = os.path.join(ROOT, path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    with open(full, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2, ensure_ascii=False)
        f.write("\n")


# --------------------------------------------------------------------------
# Knowledge bases

PLATFORMS = [
    ("P01", GEE, "Cloud platform for planetary-scale geospatial analysis with a JavaScript code editor and a petabyte data catalog.",
     "Cloud computing platform", "Large-area raster analysis, time series, classification", "Built-in data catalog, Cloud assets, Drive export",
     "Free for research with registration", "Developer guides, community forum", "Browser based; Python client available"),
    ("P02", PIE, "Chinese cloud remote sensing platform offering online image processing through a JavaScript API.",
     "Cloud computing platform", "Remote sensing image processing, index calculation", "Built-in catalog of Chinese and international satellites",
     "Registration required", "Online documentation and tutorials", "Browser based"),
    ("P03", ARCGIS, "Python library for working with maps, feature layers and spatial analysis in ArcGIS Online and Enterprise.",
     "Python library", "Vector analysis, geocoding, feature layer management", "Feature services, ArcGIS Online items, local files",
     "Anonymous access for public content; licensed for analysis", "Esri documentation and samples", "Windows, macOS, Linux"),
    ("P04", GDAL, "Python bindings of the Geospatial Data Abstraction Library for raster and vector I/O and transformation.",
     "Python library", "Raster reading, clipping, reprojection, format conversion", "GeoTIFF, NetCDF, HDF, Shapefile and 200+ formats",
     "Open source (MIT)", "Mailing list, API reference", "Windows, macOS, Linux"),
    ("P05", RRASTER, "R package for reading, writing, manipulating and analysing gridded spatial data.",
     "R package", "Raster algebra, zonal statistics, NDVI calculation", "GeoTIFF and GDAL-supported rasters",
     "Open source (GPL)", "CRAN documentation, vignettes", "Windows, macOS, Linux"),
    ("P06", FOLIUM, "Python library that renders Leaflet maps for interactive visualization of geospatial data.",
     "Python library", "Interactive web maps, choropleths, overlays", "GeoJSON, image overlays, tile layers",
     "Open source (MIT)", "Documentation and example gallery", "Any browser; HTML output"),
    ("P07", "QGIS", "Desktop GIS with a Python console and processing framework for vector and raster analysis.",
     "Desktop software", "Cartography, geoprocessing, data editing", "Shapefile, GeoPackage, WMS, PostGIS",
     "Open source (GPL)", "User manual, community plugins", "Windows, macOS, Linux"),
    ("P08", "GeoPandas", "Python library extending pandas with geometric types and spatial operations.",
     "Python library", "Vector data manipulation, spatial joins, overlays", "Shapefile, GeoJSON, GeoPackage via Fiona",
     "Open source (BSD)", "User guide and API reference", "Windows, macOS, Linux"),
    ("P09", "Rasterio", "Pythonic raster I/O built on GDAL with NumPy arrays.",
     "Python library", "Raster reading, windowed processing, masking", "GeoTIFF and GDAL-supported rasters",
     "Open source (BSD)", "Documentation and examples", "Windows, macOS, Linux"),
    ("P10", "WhiteboxTools", "Geospatial analysis toolkit with strong hydrological and terrain analysis tools.",
     "Command-line toolkit", "Watershed delineation, flow accumulation, LiDAR", "GeoTIFF, Shapefile, LAS",
     "Open source (MIT)", "User manual", "Windows, macOS, Linux"),
    ("P11", "xarray", "Labelled multi-dimensional arrays for climate and Earth observation data cubes.",
     "Python library", "NetCDF time series, climatologies, aggregation", "NetCDF, Zarr, GRIB via cfgrib",
     "Open source (Apache)", "Documentation and tutorials", "Windows, macOS, Linux"),
    ("P12", "sf", "R package for simple features vector data.",
     "R package", "Vector analysis, spatial predicates, plotting", "Shapefile, GeoPackage, PostGIS",
     "Open source (GPL)", "CRAN documentation, vignettes", "Windows, macOS, Linux"),
    ("P13", "Leafmap", "Python package for interactive mapping in Jupyter with multiple backends.",
     "Python library", "Interactive maps, split panels, time sliders", "COG, STAC, GeoJSON",
     "Open source (MIT)", "Documentation and notebooks", "Jupyter environments"),
    ("P14", "OSMnx", "Python package to download and analyse OpenStreetMap street networks.",
     "Python library", "Street network analysis, routing, building footprints", "OpenStreetMap Overpass API",
     "Open source (MIT)", "Documentation and examples", "Windows, macOS, Linux"),
]

FIELDS_PLATFORM = ["Platform_id", "Name", "Description", "Platform_type", "Task_suitability",
                   "Data_source_interfaces", "Access_permissions", "Technical_support",
                   "Cross_platform_compatibility"]

# (full name, description, parameters, output type)
FUNCTIONS = {
    (GEE, "JavaScript", "ee"): [
        ("ee.Image.clip", "Clips an image to a geometry or feature collection.", "geometry: Geometry|Feature|FeatureCollection", "Image"),
        ("ee.Image.clipToCollection", "Clips an image to the union of a feature collection.", "collection: FeatureCollection", "Image"),
        ("ee.Image.normalizedDifference", "Computes the normalized difference between two bands, e.g. NDVI from NIR and red.", "bandNames: List", "Image"),
        ("ee.Image.select", "Selects bands from an image by name or index.", "var_args: String|List", "Image"),
        ("ee.Image.reduceRegion", "Applies a reducer to all pixels in a region and returns a dictionary of statistics.", "reducer, geometry, scale, maxPixels", "Dictionary"),
        ("ee.Image.gte", "Returns 1 where the image is greater than or equal to a value.", "image2: Image|Number", "Image"),
        ("ee.Image.rename", "Renames the bands of an image.", "var_args: String|List", "Image"),
        ("ee.Image.updateMask", "Updates the mask of an image.", "mask: Image", "Image"),
        ("ee.Image.reproject", "Forces an image to be computed in a given projection and scale.", "crs, crsTransform, scale", "Image"),
        ("ee.Image.expression", "Evaluates an arithmetic expression on image bands, e.g. EVI.", "expression: String, map: Dictionary", "Image"),
        ("ee.Image.classify", "Classifies an image with a trained classifier for land cover mapping.", "classifier: Classifier, outputName: String", "Image"),
        ("ee.Image.sampleRegions", "Samples image pixels at training features for classification.", "collection, properties, scale", "FeatureCollection"),
        ("ee.ImageCollection.filterDate", "Filters a collection to images within a date range.", "start: Date|String, end: Date|String", "ImageCollection"),
        ("ee.ImageCollection.filterBounds", "Filters a collection to images intersecting a geometry.", "geometry: Geometry", "ImageCollection"),
        ("ee.ImageCollection.median", "Reduces a collection to its per-pixel median composite.", "", "Image"),
        ("ee.ImageCollection.mean", "Reduces a collection to its per-pixel mean.", "", "Image"),
        ("ee.ImageCollection.sum", "Reduces a collection by summing all images, e.g. fire occurrence counts.", "", "Image"),
        ("ee.ImageCollection.map", "Maps a function over every image in a collection.", "algorithm: Function", "ImageCollection"),
        ("ee.ImageCollection.first", "Returns the first image in a collection.", "", "Image"),
        ("ee.ImageCollection.select", "Selects bands from every image in a collection.", "selectors: List", "ImageCollection"),
        ("ee.FeatureCollection.filter", "Filters a feature collection with a filter, e.g. a country name.", "filter: Filter", "FeatureCollection"),
        ("ee.FeatureCollection.geometry", "Returns the union of all geometries in the collection.", "maxError", "Geometry"),
        ("ee.Filter.eq", "Creates an equality filter on a property.", "name: String, value: Object", "Filter"),
        ("ee.Geometry.Rectangle", "Constructs a rectangle polygon from corner coordinates.", "coords: List, proj, geodesic", "Geometry"),
        ("ee.Geometry.Point", "Constructs a point from longitude and latitude.", "coords: List", "Geometry"),
        ("ee.Geometry.buffer", "Buffers a geometry by a distance in meters.", "distance: Number, maxError", "Geometry"),
        ("ee.Reducer.mean", "Creates a reducer that computes the mean.", "", "Reducer"),
        ("ee.Reducer.sum", "Creates a reducer that computes the sum.", "", "Reducer"),
        ("ee.Classifier.smileRandomForest", "Creates a random forest classifier for land cover classification.", "numberOfTrees", "Classifier"),
        ("ee.Date", "Constructs a date from a string or milliseconds.", "date: String|Number", "Date"),
        ("Export.image.toDrive", "Exports an image as a GeoTIFF to Google Drive.", "image, description, region, scale, crs, fileFormat, maxPixels", "Task"),
        ("Export.image.toAsset", "Exports an image to an Earth Engine asset.", "image, description, assetId, region, scale", "Task"),
        ("Export.table.toDrive", "Exports a feature collection as CSV or SHP to Google Drive.", "collection, description, fileFormat", "Task"),
        ("Map.addLayer", "Adds an image or feature collection layer to the map display.", "eeObject, visParams, name", "Layer"),
        ("Map.centerObject", "Centers the map on an object.", "object, zoom", "void"),
        ("ui.Chart.image.series", "Generates a time series chart of image values over a region.", "imageCollection, region, reducer, scale", "Chart"),
    ],
    (PIE, "JavaScript", "pie"): [
        ("pie.Image.clip", "Clips a PIE image to a geometry.", "geometry", "Image"),
        ("pie.ImageCollection.filterDate", "Filters a PIE image collection by date range.", "start, end", "ImageCollection"),
        ("pie.ImageCollection.filterBounds", "Filters a PIE image collection by region.", "geometry", "ImageCollection"),
        ("pie.Image.normalizedDifference", "Computes a normalized difference index between two bands.", "bandNames", "Image"),
        ("pie.ImageCollection.median", "Builds a median composite in PIE Engine.", "", "Image"),
        ("pie.Export.image", "Exports a PIE image to the user's cloud storage.", "image, description, region, scale", "Task"),
        ("pie.Map.addLayer", "Adds a layer to the PIE map view.", "object, style, name", "Layer"),
        ("pie.FeatureCollection.filter", "Filters PIE administrative boundaries.", "filter", "FeatureCollection"),
    ],
    (ARCGIS, "Python", "arcgis"): [
        ("arcgis.gis.GIS", "Connects to ArcGIS Online or an ArcGIS Enterprise portal.", "url, username, password", "GIS"),
        ("arcgis.geometry.Point", "Creates a point geometry from coordinates and a spatial reference.", "iterable: dict", "Point"),
        ("arcgis.geometry.Polygon", "Creates a polygon geometry from rings.", "iterable: dict", "Polygon"),
        ("arcgis.geometry.buffer", "Buffers geometries by distances, optionally geodesic, e.g. a 10 km circular area.", "geometries, in_sr, distances, unit, geodesic", "list[Polygon]"),
        ("arcgis.geometry.project", "Projects geometries to another spatial reference.", "geometries, in_sr, out_sr", "list[Geometry]"),
        ("arcgis.geometry.Geometry.intersect", "Intersects two geometries.", "second_geometry, dimension", "Geometry"),
        ("arcgis.features.Feature", "Creates a feature from a geometry and attributes.", "geometry, attributes", "Feature"),
        ("arcgis.features.FeatureSet", "Creates a set of features that can be saved or queried.", "features, spatial_reference", "FeatureSet"),
        ("arcgis.features.FeatureSet.save", "Saves a feature set to a shapefile or feature class on disk.", "save_location, out_name", "str"),
        ("arcgis.features.FeatureSet.sdf", "Returns the feature set as a spatially enabled DataFrame.", "", "DataFrame"),
        ("arcgis.features.FeatureLayer", "Accesses a hosted feature layer by URL.", "url, gis", "FeatureLayer"),
        ("arcgis.features.FeatureLayer.query", "Queries a feature layer with a where clause and returns a feature set.", "where, out_fields, geometry_filter", "FeatureSet"),
        ("arcgis.features.GeoAccessor.from_featureclass", "Reads a feature class into a spatially enabled DataFrame.", "location", "DataFrame"),
        ("arcgis.features.GeoAccessor.to_featureclass", "Writes a spatially enabled DataFrame to a shapefile or feature class.", "location, overwrite", "str"),
        ("pandas.DataFrame.to_csv", "Writes a DataFrame (e.g. a spatially enabled DataFrame) to a CSV file.", "path_or_buf, index", "None"),
        ("arcgis.raster.ImageryLayer", "Accesses an imagery layer such as land cover.", "url, gis", "ImageryLayer"),
        ("arcgis.raster.functions.clip", "Clips a raster to a geometry.", "raster, geometry", "ImageryLayer"),
        ("arcgis.raster.functions.ndvi", "Computes NDVI from an imagery layer.", "raster, band_indexes", "ImageryLayer"),
        ("arcgis.raster.ImageryLayer.export_image", "Exports an imagery layer to a file such as GeoTIFF.", "bbox, export_format, save_folder", "str"),
        ("arcgis.geocoding.geocode", "Geocodes an address or place name to coordinates.", "address, max_locations", "list[dict]"),
        ("arcgis.features.analysis.create_buffers", "Creates buffer polygons around features using the spatial analysis service.", "input_layer, distances, units", "FeatureLayer"),
        ("arcgis.features.analysis.summarize_within", "Summarizes features within polygons.", "sum_within_layer, summary_layer", "FeatureLayer"),
    ],
    (GDAL, "Python", "osgeo.gdal"): [
        ("osgeo.gdal.Open", "Opens a raster dataset such as a GeoTIFF.", "utf8_path, eAccess", "Dataset"),
        ("osgeo.gdal.Translate", "Converts, subsets or clips a raster with projWin.", "destName, srcDS, projWin, format", "Dataset"),
        ("osgeo.gdal.Warp", "Reprojects, mosaics or clips rasters with a cutline.", "destNameOrDestDS, srcDSOrSrcDSTab, dstSRS, cutlineDSName, cropToCutline", "Dataset"),
        ("osgeo.gdal.GetDriverByName", "Returns a raster driver such as GTiff.", "name", "Driver"),
        ("osgeo.gdal.Driver.Create", "Creates a new raster dataset with a given size, band count and data type.", "utf8_path, xsize, ysize, bands, eType", "Dataset"),
        ("osgeo.gdal.Dataset.GetRasterBand", "Returns a raster band by index (1-based).", "nBand", "Band"),
        ("osgeo.gdal.Dataset.GetGeoTransform", "Returns the affine geotransform of a dataset.", "", "tuple"),
        ("osgeo.gdal.Dataset.SetGeoTransform", "Sets the affine geotransform of a dataset.", "transform", "int"),
        ("osgeo.gdal.Dataset.GetProjection", "Returns the dataset projection as WKT.", "", "str"),
        ("osgeo.gdal.Dataset.SetProjection", "Sets the dataset projection from WKT.", "prj", "int"),
        ("osgeo.gdal.Dataset.FlushCache", "Flushes cached writes to disk.", "", "None"),
        ("osgeo.gdal.Band.ReadAsArray", "Reads a raster band into a NumPy array, e.g. precipitation values.", "xoff, yoff, win_xsize, win_ysize", "ndarray"),
        ("osgeo.gdal.Band.WriteArray", "Writes a NumPy array into a raster band.", "array, xoff, yoff", "int"),
        ("osgeo.gdal.Band.SetNoDataValue", "Sets the nodata value of a band.", "value", "int"),
        ("osgeo.gdal.Band.ComputeStatistics", "Computes min, max, mean and standard deviation of a band.", "approx_ok", "list"),
        ("osgeo.gdal.BuildVRT", "Builds a virtual mosaic from several rasters.", "destName, srcDSOrSrcDSTab", "Dataset"),
        ("osgeo.gdal.Polygonize", "Converts raster regions into vector polygons.", "srcBand, maskBand, outLayer, iPixValField", "int"),
        ("osgeo.gdal.Rasterize", "Burns vector geometries into a raster.", "destNameOrDestDS, srcDS, burnValues", "Dataset"),
        ("osgeo.ogr.Open", "Opens a vector data source such as a Shapefile.", "utf8_path, update", "DataSource"),
        ("osgeo.osr.SpatialReference.ImportFromEPSG", "Initializes a spatial reference from an EPSG code.", "arg", "int"),
        ("numpy.nanmean", "Computes the mean ignoring NaN values, e.g. average precipitation across months.", "a, axis", "ndarray"),
        ("numpy.stack", "Stacks arrays along a new axis.", "arrays, axis", "ndarray"),
        ("glob.glob", "Returns file paths matching a pattern.", "pathname", "list"),
    ],
    (RRASTER, "R", "raster"): [
        ("raster::raster", "Creates a RasterLayer from a file such as a Landsat band GeoTIFF.", "x, band", "RasterLayer"),
        ("raster::stack", "Creates a RasterStack from several layers or files.", "x, bands", "RasterStack"),
        ("raster::brick", "Creates a multi-layer RasterBrick.", "x", "RasterBrick"),
        ("raster::crop", "Crops a raster to an extent.", "x, y", "Raster*"),
        ("raster::mask", "Masks raster cells outside a polygon.", "x, mask", "Raster*"),
        ("raster::overlay", "Combines layers with a function, e.g. NDVI from NIR and red.", "x, y, fun", "RasterLayer"),
        ("raster::calc", "Applies a function to raster cells.", "x, fun", "RasterLayer"),
        ("raster::writeRaster", "Writes a raster to a file such as GeoTIFF (format = \"GTiff\").", "x, filename, format, overwrite", "Raster*"),
        ("raster::projectRaster", "Reprojects a raster to a new coordinate reference system.", "from, to, crs, method", "RasterLayer"),
        ("raster::resample", "Resamples a raster to another raster's grid.", "x, y, method", "RasterLayer"),
        ("raster::extent", "Returns or creates an Extent object.", "x", "Extent"),
        ("raster::cellStats", "Computes summary statistics of all cells.", "x, stat, na.rm", "numeric"),
        ("raster::extract", "Extracts raster values at points or polygons.", "x, y, fun", "matrix"),
        ("raster::merge", "Merges adjacent rasters into one.", "x, y", "RasterLayer"),
        ("raster::reclassify", "Reclassifies raster values with a matrix.", "x, rcl", "RasterLayer"),
        ("raster::plot", "Plots a raster layer.", "x, col", "NULL"),
        ("raster::getData", "Downloads administrative boundaries such as GADM country outlines.", "name, country, level", "SpatialPolygonsDataFrame"),
    ],
    (FOLIUM, "Python", "folium"): [
        ("folium.Map", "Creates an interactive Leaflet map centered at a location.", "location, zoom_start, tiles", "Map"),
        ("folium.Map.save", "Saves the map as a standalone HTML file.", "outfile", "None"),
        ("folium.raster_layers.ImageOverlay", "Overlays an image array (e.g. NDVI) on the map within bounds.", "image, bounds, opacity, colormap, name", "ImageOverlay"),
        ("folium.raster_layers.TileLayer", "Adds a tile layer to the map.", "tiles, attr, name", "TileLayer"),
        ("folium.GeoJson", "Adds GeoJSON vector data to the map.", "data, style_function, name", "GeoJson"),
        ("folium.Choropleth", "Creates a choropleth layer from GeoJSON and tabular data.", "geo_data, data, columns, key_on, fill_color", "Choropleth"),
        ("folium.LayerControl", "Adds a layer switcher control to the map.", "position, collapsed", "LayerControl"),
        ("folium.Marker", "Adds a marker at a location.", "location, popup, icon", "Marker"),
        ("folium.Circle", "Draws a circle with a radius in meters.", "location, radius", "Circle"),
        ("folium.plugins.HeatMap", "Adds a heat map layer from point data.", "data, radius", "HeatMap"),
        ("branca.colormap.LinearColormap", "Creates a linear color scale legend for NDVI or other values.", "colors, vmin, vmax, caption", "LinearColormap"),
        ("rasterio.open", "Opens a raster file for reading band arrays and bounds.", "fp, mode", "DatasetReader"),
        ("rasterio.io.DatasetReader.read", "Reads raster bands into a NumPy array.", "indexes, window", "ndarray"),
        ("numpy.clip", "Clips array values to an interval.", "a, a_min, a_max", "ndarray"),
        ("numpy.nan_to_num", "Replaces NaN with a number.", "x, nan", "ndarray"),
    ],
}


def function_records():
    out = []
    for (platform, language, library), funcs in FUNCTIONS.items():
        for full, desc, params, output in funcs:
            short = full.split(".")[-1].split("::")[-1]
            op_id = (platform.split()[0].lower().replace("-", "") + "_" + full.replace("::", "_").replace(".", "_")).lower()
            usage = (full + "(" + params.split(":")[0].split(",")[0].strip() + ")") if params else full + "()"
            out.append({
                "Operator_id": op_id,
                "Full_name": full,
                "Short_name": short,
                "Library_name": library,
                "Language": language,
                "Platform": platform,
                "Description": desc,
                "Usage": usage,
                "Parameters": params,
                "Output_type": output,
            })
    return out


# (id, name, provider, snippet, tags, description, platform)
DATASETS = [
    ("LANDSAT_LC08_C02_T1_L2", "USGS Landsat 8 Level 2, Collection 2, Tier 1", "USGS", "ee.ImageCollection('LANDSAT/LC08/C02/T1_L2')",
     ["landsat", "usgs", "surface reflectance", "sr", "lc08", "oli", "tirs"], "Atmospherically corrected surface reflectance and land surface temperature from Landsat 8 OLI/TIRS.", GEE),
    ("LANDSAT_LC09_C02_T1_L2", "USGS Landsat 9 Level 2, Collection 2, Tier 1", "USGS", "ee.ImageCollection('LANDSAT/LC09/C02/T1_L2')",
     ["landsat", "usgs", "surface reflectance", "lc09"], "Surface reflectance from Landsat 9 OLI-2/TIRS-2.", GEE),
    ("LANDSAT_LE07_C02_T1_L2", "USGS Landsat 7 Level 2, Collection 2, Tier 1", "USGS", "ee.ImageCollection('LANDSAT/LE07/C02/T1_L2')",
     ["landsat", "usgs", "etm", "le07"], "Surface reflectance from Landsat 7 ETM+.", GEE),
    ("LANDSAT_LT05_C02_T1_L2", "USGS Landsat 5 Level 2, Collection 2, Tier 1", "USGS", "ee.ImageCollection('LANDSAT/LT05/C02/T1_L2')",
     ["landsat", "usgs", "tm", "lt05"], "Surface reflectance from Landsat 5 TM.", GEE),
    ("COPERNICUS_S2_SR_HARMONIZED", "Harmonized Sentinel-2 MSI: MultiSpectral Instrument, Level-2A", "European Union/ESA/Copernicus",
     "ee.ImageCollection('COPERNICUS/S2_SR_HARMONIZED')", ["sentinel", "copernicus", "msi", "surface reflectance"], "Sentinel-2 surface reflectance at 10-60 m.", GEE),
    ("COPERNICUS_S1_GRD", "Sentinel-1 SAR GRD", "European Union/ESA/Copernicus", "ee.ImageCollection('COPERNICUS/S1_GRD')",
     ["sentinel", "sar", "radar", "backscatter"], "C-band synthetic aperture radar ground range detected scenes.", GEE),
    ("MODIS_061_MOD14A2", "MOD14A2.061: Terra Thermal Anomalies & Fire 8-Day Global 1km", "NASA LP DAAC at the USGS EROS Center",
     "ee.ImageCollection('MODIS/061/MOD14A2')", ["modis", "fire", "thermal anomalies", "hotspot", "terra", "firemask"], "8-day composite fire mask and maximum fire radiative power.", GEE),
    ("MODIS_061_MCD12Q1", "MCD12Q1.061 MODIS Land Cover Type Yearly Global 500m", "NASA LP DAAC at the USGS EROS Center",
     "ee.ImageCollection('MODIS/061/MCD12Q1')", ["modis", "land cover", "landcover", "igbp", "classification", "yearly"], "Annual global land cover types from MODIS Terra and Aqua.", GEE),
    ("MODIS_061_MOD13Q1", "MOD13Q1.061 Terra Vegetation Indices 16-Day Global 250m", "NASA LP DAAC at the USGS EROS Center",
     "ee.ImageCollection('MODIS/061/MOD13Q1')", ["modis", "ndvi", "evi", "vegetation"], "16-day NDVI and EVI composites.", GEE),
    ("MODIS_061_MOD11A2", "MOD11A2.061 Terra Land Surface Temperature 8-Day Global 1km", "NASA LP DAAC at the USGS EROS Center",
     "ee.ImageCollection('MODIS/061/MOD11A2')", ["modis", "lst", "temperature", "land surface temperature"], "8-day land surface temperature and emissivity.", GEE),
    ("MODIS_061_MOD10A1", "MOD10A1.061 Terra Snow Cover Daily Global 500m", "NSIDC", "ee.ImageCollection('MODIS/061/MOD10A1')",
     ["modis", "snow", "cryosphere"], "Daily snow cover from MODIS Terra.", GEE),
    ("UCSB_CHG_CHIRPS_DAILY", "CHIRPS Daily: Climate Hazards Group InfraRed Precipitation With Station Data", "UCSB/CHG",
     "ee.ImageCollection('UCSB-CHG/CHIRPS/DAILY')", ["chirps", "precipitation", "rainfall", "climate"], "Quasi-global daily rainfall estimates at 0.05 degrees.", GEE),
    ("UCSB_CHG_CHIRPS_PENTAD", "CHIRPS Pentad: Climate Hazards Group InfraRed Precipitation With Station Data", "UCSB/CHG",
     "ee.ImageCollection('UCSB-CHG/CHIRPS/PENTAD')", ["chirps", "precipitation", "rainfall", "pentad"], "Five-day rainfall estimates.", GEE),
    ("ECMWF_ERA5_LAND_MONTHLY_AGGR", "ERA5-Land Monthly Aggregated", "ECMWF / Copernicus Climate Change Service",
     "ee.ImageCollection('ECMWF/ERA5_LAND/MONTHLY_AGGR')", ["era5", "reanalysis", "temperature", "precipitation", "climate"], "Monthly land reanalysis variables.", GEE),
    ("NASA_GPM_L3_IMERG_V06", "GPM: Monthly Global Precipitation Measurement (GPM) v6", "NASA GES DISC", "ee.ImageCollection('NASA/GPM_L3/IMERG_MONTHLY_V06')",
     ["gpm", "imerg", "precipitation", "rainfall"], "Monthly merged satellite precipitation.", GEE),
    ("USDOS_LSIB_SIMPLE_2017", "LSIB 2017: Large Scale International Boundary Polygons, Simplified", "United States Department of State",
     "ee.FeatureCollection('USDOS/LSIB_SIMPLE/2017')", ["boundaries", "countries", "borders", "political"], "Simplified country boundary polygons.", GEE),
    ("FAO_GAUL_2015_LEVEL1", "FAO GAUL: Global Administrative Unit Layers 2015, First-Level Administrative Units", "FAO UN",
     "ee.FeatureCollection('FAO/GAUL/2015/level1')", ["boundaries", "provinces", "states", "administrative"], "First-level administrative boundaries.", GEE),
    ("TIGER_2018_STATES", "TIGER: US Census States 2018", "United States Census Bureau", "ee.FeatureCollection('TIGER/2018/States')",
     ["boundaries", "united states", "states", "census"], "US state boundaries.", GEE),
    ("USGS_SRTMGL1_003", "NASA SRTM Digital Elevation 30m", "NASA / USGS / JPL-Caltech", "ee.Image('USGS/SRTMGL1_003')",
     ["dem", "elevation", "srtm", "topography"], "Global 30 m digital elevation model.", GEE),
    ("WWF_HYDROSHEDS_15ACC", "WWF HydroSHEDS Flow Accumulation, 15 Arc-Seconds", "WWF", "ee.Image('WWF/HydroSHEDS/15ACC')",
     ["hydrology", "flow accumulation", "hydrosheds", "watershed"], "Flow accumulation derived from SRTM.", GEE),
    ("WWF_HYDROSHEDS_V1_BASINS_HYBAS_6", "HydroSHEDS Basins Level 6", "WWF", "ee.FeatureCollection('WWF/HydroSHEDS/v1/Basins/hybas_6')",
     ["hydrology", "basins", "watershed", "catchment"], "Nested watershed boundaries.", GEE),
    ("ESA_WORLDCOVER_V200", "ESA WorldCover 10m v200", "ESA", "ee.ImageCollection('ESA/WorldCover/v200')",
     ["land cover", "landcover", "esa", "worldcover", "classification"], "Global 10 m land cover for 2021.", GEE),
    ("GOOGLE_DYNAMICWORLD_V1", "Dynamic World V1", "World Resources Institute / Google", "ee.ImageCollection('GOOGLE/DYNAMICWORLD/V1')",
     ["land cover", "landcover", "near real-time", "sentinel"], "Near real-time 10 m land use land cover.", GEE),
    ("JRC_GSW1_4_GLOBALSURFACEWATER", "JRC Global Surface Water Mapping Layers, v1.4", "EC JRC / Google", "ee.Image('JRC/GSW1_4/GlobalSurfaceWater')",
     ["water", "surface water", "hydrology", "occurrence"], "Surface water occurrence and change 1984-2021.", GEE),
    ("NOAA_VIIRS_DNB_MONTHLY_V1_VCMSLCFG", "VIIRS Nighttime Day/Night Band Composites", "NOAA", "ee.ImageCollection('NOAA/VIIRS/DNB/MONTHLY_V1/VCMSLCFG')",
     ["nighttime lights", "viirs", "urban"], "Monthly average nighttime radiance.", GEE),
    ("COPERNICUS_S5P_OFFL_L3_NO2", "Sentinel-5P OFFL NO2", "European Union/ESA/Copernicus", "ee.ImageCollection('COPERNICUS/S5P/OFFL/L3_NO2')",
     ["air quality", "no2", "sentinel-5p", "pollution"], "Tropospheric NO2 column density.", GEE),
    ("ECMWF_CAMS_NRT", "Copernicus Atmosphere Monitoring Service Near-Real-Time", "ECMWF", "ee.ImageCollection('ECMWF/CAMS/NRT')",
     ["air quality", "pm2.5", "aerosol", "pollution"], "Aerosol and particulate matter forecasts.", GEE),
    ("IDAHO_EPSCOR_TERRACLIMATE", "TerraClimate: Monthly Climate and Climatic Water Balance", "University of Idaho", "ee.ImageCollection('IDAHO_EPSCOR/TERRACLIMATE')",
     ["climate", "precipitation", "temperature", "drought"], "Monthly climate and water balance 1958-present.", GEE),
    ("NASA_ORNL_DAYMET_V4", "Daymet V4: Daily Surface Weather and Climatological Summaries", "NASA ORNL DAAC", "ee.ImageCollection('NASA/ORNL/DAYMET_V4')",
     ["weather", "temperature", "precipitation", "north america"], "Daily gridded weather for North America.", GEE),
    ("USGS_NLCD_RELEASES_2019_REL_NLCD", "NLCD: USGS National Land Cover Database", "USGS", "ee.ImageCollection('USGS/NLCD_RELEASES/2019_REL/NLCD')",
     ["land cover", "landcover", "united states", "nlcd"], "US land cover at 30 m.", GEE),
    ("UMD_HANSEN_GLOBAL_FOREST_CHANGE_2022_V1_10", "Hansen Global Forest Change v1.10", "Hansen/UMD/Google/USGS/NASA", "ee.Image('UMD/hansen/global_forest_change_2022_v1_10')",
     ["forest", "deforestation", "tree cover", "loss"], "Forest loss and gain 2000-2022.", GEE),
    ("MODIS_061_MCD64A1", "MCD64A1.061 MODIS Burned Area Monthly Global 500m", "NASA LP DAAC at the USGS EROS Center", "ee.ImageCollection('MODIS/061/MCD64A1')",
     ["modis", "burned area", "fire"], "Monthly burned area product.", GEE),
    ("FIRMS", "FIRMS: Fire Information for Resource Management System", "NASA / LANCE / EOSDIS", "ee.ImageCollection('FIRMS')",
     ["fire", "hotspot", "active fire", "modis"], "Near real-time active fire detections.", GEE),
    ("PIE_LANDSAT8_SR", "Landsat 8 surface reflectance (PIE)", "USGS", "pie.ImageCollection('LC08/01/T1_SR')",
     ["landsat", "surface reflectance"], "Landsat 8 surface reflectance mirrored in PIE Engine.", PIE),
    ("PIE_GF1_WFV", "GF-1 WFV multispectral imagery", "CRESDA", "pie.ImageCollection('GF1/WFV')",
     ["gaofen", "gf-1", "multispectral", "china"], "Gaofen-1 wide field view imagery.", PIE),
    ("PIE_SENTINEL2_L2A", "Sentinel-2 L2A (PIE)", "ESA", "pie.ImageCollection('S2/L2A')",
     ["sentinel", "surface reflectance"], "Sentinel-2 surface reflectance in PIE Engine.", PIE),
    ("PIE_CHINA_PROVINCES", "China provincial boundaries", "PIE Engine", "pie.FeatureCollection('NGCC/CHINA_PROVINCE_BOUNDARY')",
     ["boundaries", "china", "provinces"], "Provincial boundaries of China.", PIE),
    ("CHIRPS_V2_MONTHLY_TIF", "CHIRPS v2.0 monthly GeoTIFF archive", "UCSB/CHG", "https://data.chc.ucsb.edu/products/CHIRPS-2.0/global_monthly/tifs/",
     ["chirps", "precipitation", "monthly", "geotiff"], "Monthly global precipitation GeoTIFFs for download.", GDAL),
    ("NATURAL_EARTH_ADMIN0", "Natural Earth Admin 0 Countries", "Natural Earth", "https://naciscdn.org/naturalearth/10m/cultural/ne_10m_admin_0_countries.zip",
     ["boundaries", "countries", "shapefile"], "Country polygons at 1:10m.", GDAL),
    ("GADM_41", "GADM 4.1 administrative areas", "GADM", "https://geodata.ucdavis.edu/gadm/gadm4.1/",
     ["boundaries", "administrative", "provinces"], "Administrative boundaries for all countries.", RRASTER),
    ("ESRI_LIVING_ATLAS_LANDCOVER_2020", "Esri 2020 Land Cover (10m)", "Esri / Impact Observatory", "https://tiledimageservices.arcgis.com/P3ePLMYs2RVChkJx/arcgis/rest/services/Esri_2020_Land_Cover_V2/ImageServer",
     ["land cover", "landcover", "sentinel", "classification"], "Global 10-class land cover for 2020.", ARCGIS),
    ("ESRI_USA_STATES", "USA States (Generalized)", "Esri", "https://services.arcgis.com/P3ePLMYs2RVChkJx/arcgis/rest/services/USA_States_Generalized/FeatureServer/0",
     ["boundaries", "united states", "states"], "Generalized US state boundaries.", ARCGIS),
    ("LANDSAT8_USGS_EARTHEXPLORER", "Landsat 8 OLI/TIRS C2 L2 scenes", "USGS EarthExplorer", "https://earthexplorer.usgs.gov/",
     ["landsat", "surface reflectance", "download"], "Scene downloads of Landsat 8 Level-2 products.", FOLIUM),
    ("WORLDCLIM_V2", "WorldClim 2.1 climate data", "WorldClim", "https://www.worldclim.org/data/worldclim21.html",
     ["climate", "temperature", "precipitation"], "Historical climate normals at 30 arc-seconds.", ""),
    ("OPENSTREETMAP_PLANET", "OpenStreetMap planet extract", "OpenStreetMap contributors", "https://planet.openstreetmap.org/",
     ["roads", "buildings", "vector"], "Crowd-sourced vector map data.", ""),
]


def dataset_records():
    out = []
    for ds_id, name, provider, snippet, tags, desc, platform in DATASETS:
        rec = {
            "Dataset_id": ds_id,
            "Name": name,
            "Provider": provider,
            "Snippet": snippet,
            "Tags": tags,
            "Description": desc,
            "DOI": "",
            "Website": snippet if snippet.startswith("http") else "https://developers.google.com/earth-engine/datasets",
        }
        if platform:
            rec["Platform"] = platform
        out.append(rec)
    return out


# --------------------------------------------------------------------------
# Corpus and scripted responses

TASKS = [
    {
        "id": "cat1", "secondary": 1,
        "text": "Use ArcGIS API for Python to generate a circular area with a 10-kilometer radius centered on San Jose, California, and output it as a Shapefile.",
        "gold": {
            "Platform": ARCGIS, "Programming_Language": "Python",
            "Analysis_Goal": "Create a circular area with a 10-kilometer radius around the center of San Jose, California.",
            "Spatial_Extent": "San Jose, California",
            "Data_Source_and_Format": "No data requirements",
            "Analysis_Methodology": "Geometric object definition",
            "Output_Format": "Shapefile",
        },
        "aliases": {"platform": ["ArcGIS Python API", "arcgis"]},
        "language": "Python",
        "modules": [
            ("Define San Jose center point", "Create a point geometry at the center of San Jose, California.", "Longitude and latitude of San Jose", "Point geometry (WGS84)", "arcgis.geometry.Point with wkid 4326"),
            ("Build 10 km circular buffer", "Buffer the center point by 10 kilometers geodesically.", "Point geometry", "Circular polygon", "arcgis.geometry.buffer with distances=[10] and kilometer units"),
            ("Export circle as Shapefile", "Wrap the polygon in a feature set and save it as a Shapefile.", "Circular polygon", "Shapefile on disk", "FeatureSet.save"),
        ],
        "blocks": [
            ["from arcgis.gis import GIS", "from arcgis.geometry import Point, buffer", "from arcgis.features import Feature, FeatureSet"],
            ["san_jose_center = Point({\"x\": -121.8863, \"y\": 37.3382, \"spatialReference\": {\"wkid\": 4326}})"],
            ["san_jose_circle = buffer([san_jose_center], in_sr=4326, distances=[10], unit=\"9036\", geodesic=True)[0]"],
            ["circle_features = FeatureSet([Feature(geometry=san_jose_circle, attributes={\"name\": \"San Jose 10 km\"})])",
             "circle_features.save(\".\", \"san_jose_10km_circle.shp\")"],
        ],
        "fix": (1, "anonymous_portal = GIS()"),
        "marker": "san_jose_circle",
    },
    {
        "id": "cat2", "secondary": 2,
        "text": "Help me clip Landsat imagery for the year 2021 within the Brazilian region on Google Earth Engine, and output it as a GeoTIFF file.",
        "gold": {
            "Platform": GEE, "Programming_Language": "JavaScript",
            "Analysis_Goal": "Clip Landsat imagery to the Brazilian region.",
            "Spatial_Extent": "Brazil", "Temporal_Extent": "Year 2021",
            "Data_Source_and_Format": "Landsat imagery",
            "Analysis_Methodology": "Image clipping", "Output_Format": "GeoTIFF",
        },
        "aliases": {"platform": ["GEE"], "temporal_extent": ["2021"]},
        "language": "JavaScript",
        "modules": [
            ("Load Brazil boundary", "Select the Brazil polygon from the simplified international boundaries.", "LSIB 2017 boundaries", "Brazil feature collection", "ee.FeatureCollection filtered by country_na"),
            ("Build 2021 Landsat composite", "Filter Landsat 8 surface reflectance to 2021 over Brazil and take the median.", "Landsat 8 collection, Brazil boundary", "Median composite image", "filterBounds, filterDate, median"),
            ("Clip composite to Brazil", "Clip the composite to the Brazil boundary.", "Composite image", "Clipped image", "ee.Image.clip"),
            ("Export GeoTIFF", "Export the clipped RGB bands to Google Drive as GeoTIFF.", "Clipped image", "GeoTIFF file", "Export.image.toDrive with fileFormat GeoTIFF"),
        ],
        "blocks": [
            [],
            ["var brazil = ee.FeatureCollection('USDOS/LSIB_SIMPLE/2017')", "  .filter(ee.Filter.eq('country_na', 'Brazil'));"],
            ["var landsat2021 = ee.ImageCollection('LANDSAT/LC08/C02/T1_L2')", "  .filterBounds(brazil)",
             "  .filterDate('2021-01-01', '2021-12-31')", "  .median();"],
            ["var brazilLandsat = landsat2021.clip(brazil);"],
            ["Export.image.toDrive({", "  image: brazilLandsat.select(['SR_B4', 'SR_B3', 'SR_B2']),", "  description: 'Brazil_Landsat_2021',",
             "  region: brazil.geometry(),", "  scale: 30,", "  fileFormat: 'GeoTIFF',", "  maxPixels: 1e13", "});"],
        ],
        "fix": (3, "Map.addLayer(brazilLandsat, {bands: ['SR_B4', 'SR_B3', 'SR_B2'], min: 7000, max: 20000}, 'Brazil 2021');"),
        "marker": "brazilLandsat",
    },
    {
        "id": "cat3", "secondary": 3,
        "text": "Analyze fire distribution in the Amazon region from 2000 to 2020 using the MOD14A2.061 dataset, and generate a fire hotspot distribution map in Google Earth Engine.",
        "gold": {
            "Platform": GEE, "Programming_Language": "JavaScript",
            "Analysis_Goal": "Analyze thermal anomaly distribution from 2000 to 2020 in the Amazon region to identify fire hotspots.",
            "Spatial_Extent": "Amazon region", "Temporal_Extent": "2000 to 2020",
            "Data_Source_and_Format": "MOD14A2.061; Terra Thermal Anomalies & Fire 8-Day Global 1km",
            "Analysis_Methodology": "Spatiotemporal data aggregation and fire analysis",
            "Output_Format": "GeoTIFF",
        },
        "aliases": {"spatial_extent": ["Amazon"], "temporal_extent": ["2000-2020"]},
        "language": "JavaScript",
        "modules": [
            ("Define Amazon region", "Approximate the Amazon region with a bounding rectangle.", "Corner coordinates", "Amazon geometry", "ee.Geometry.Rectangle"),
            ("Load MOD14A2 fire masks", "Load MOD14A2.061 fire masks for 2000-2020 over the region.", "MOD14A2.061 collection", "FireMask collection", "filterDate, filterBounds, select FireMask"),
            ("Aggregate fire occurrences", "Count 8-day periods with fire (FireMask >= 7) per pixel.", "FireMask collection", "Fire count image", "map gte(7), sum, clip"),
            ("Export hotspot map", "Export the fire count image as a GeoTIFF.", "Fire count image", "GeoTIFF file", "Export.image.toDrive"),
        ],
        "blocks": [
            [],
            ["var amazon = ee.Geometry.Rectangle([-79.0, -20.0, -44.0, 6.0]);"],
            ["var fireMasks = ee.ImageCollection('MODIS/061/MOD14A2')", "  .filterDate('2000-01-01', '2020-12-31')",
             "  .filterBounds(amazon)", "  .select('FireMask');"],
            ["var fireCount = fireMasks.map(function (img) {", "  return img.gte(7).rename('fire');", "}).sum().clip(amazon);"],
            ["Export.image.toDrive({", "  image: fireCount,", "  description: 'Amazon_Fire_Hotspots_2000_2020',", "  region: amazon,",
             "  scale: 1000,", "  fileFormat: 'GeoTIFF',", "  maxPixels: 1e13", "});"],
        ],
        "fix": (3, "Map.addLayer(fireCount, {min: 0, max: 50, palette: ['white', 'orange', 'red']}, 'Fire hotspots');"),
        "marker": "fireCount",
    },
    {
        "id": "cat4", "secondary": 4,
        "text": "Calculate NDVI for China in August 2020 using the Raster package in R, based on Landsat imagery, and output the result as a GeoTIFF file.",
        "gold": {
            "Platform": RRASTER, "Programming_Language": "R",
            "Analysis_Goal": "Calculate NDVI for China in August 2020 using Landsat imagery.",
            "Spatial_Extent": "China", "Temporal_Extent": "August 2020",
            "Data_Source_and_Format": "Landsat imagery",
            "Analysis_Methodology": "NDVI calculation", "Output_Format": "GeoTIFF",
        },
        "aliases": {"platform": ["R raster", "raster"]},
        "language": "R",
        "modules": [
            ("Load Landsat red and NIR bands", "Read the August 2020 Landsat 8 red (B4) and near-infrared (B5) bands.", "Landsat 8 band GeoTIFFs", "Two RasterLayers", "raster::raster"),
            ("Compute NDVI", "Compute (NIR - red) / (NIR + red).", "Red and NIR layers", "NDVI layer", "raster algebra"),
            ("Write NDVI GeoTIFF", "Write the NDVI layer as a GeoTIFF.", "NDVI layer", "GeoTIFF file", "raster::writeRaster with format GTiff"),
        ],
        "blocks": [
            ["library(raster)"],
            ["red <- raster(\"LC08_L2SP_China_20200815_SR_B4.TIF\")", "nir <- raster(\"LC08_L2SP_China_20200815_SR_B5.TIF\")"],
            ["china_ndvi <- (nir - red) / (nir + red)"],
            ["writeRaster(china_ndvi, \"china_ndvi_2020_08.tif\", format = \"GTiff\", overwrite = TRUE)"],
        ],
        "fix": (2, "china_ndvi[china_ndvi < -1 | china_ndvi > 1] <- NA"),
        "marker": "china_ndvi",
    },
    {
        "id": "cat5", "secondary": 5,
        "text": "Generate a 2020 land cover map of Indonesia in Google Earth Engine and output it as a GeoTIFF file.",
        "gold": {
            "Platform": GEE, "Programming_Language": "JavaScript",
            "Analysis_Goal": "Generate a 2020 land cover map of Indonesia",
            "Spatial_Extent": "Indonesia", "Temporal_Extent": "2020",
            "Data_Source_and_Format": "MODIS land cover data",
            "Analysis_Methodology": "Land cover classification", "Output_Format": "GeoTIFF",
        },
        "aliases": {"data_source_and_format": ["MCD12Q1", "MODIS MCD12Q1 land cover"]},
        "language": "JavaScript",
        "modules": [
            ("Load Indonesia boundary", "Select Indonesia from the simplified international boundaries.", "LSIB 2017 boundaries", "Indonesia feature collection", "ee.Filter.eq on country_na"),
            ("Select 2020 MODIS land cover", "Take the 2020 MCD12Q1 IGBP land cover layer.", "MCD12Q1.061 collection", "Land cover image", "filterDate, first, select LC_Type1"),
            ("Clip land cover to Indonesia", "Clip the land cover image to Indonesia.", "Land cover image", "Clipped land cover", "ee.Image.clip"),
            ("Export land cover GeoTIFF", "Export the clipped land cover to Google Drive as GeoTIFF.", "Clipped land cover", "GeoTIFF file", "Export.image.toDrive"),
        ],
        "blocks": [
            [],
            ["var indonesia = ee.FeatureCollection('USDOS/LSIB_SIMPLE/2017')", "  .filter(ee.Filter.eq('country_na', 'Indonesia'));"],
            ["var landCover2020 = ee.ImageCollection('MODIS/061/MCD12Q1')", "  .filterDate('2020-01-01', '2020-12-31')",
             "  .first()", "  .select('LC_Type1');"],
            ["var indonesiaLandCover = landCover2020.clip(indonesia);"],
            ["Export.image.toDrive({", "  image: indonesiaLandCover,", "  description: 'Indonesia_Land_Cover_2020',",
             "  region: indonesia.geometry(),", "  scale: 500,", "  fileFormat: 'GeoTIFF',", "  maxPixels: 1e13", "});"],
        ],
        "fix": (3, "Map.addLayer(indonesiaLandCover, {min: 1, max: 17}, 'Land cover 2020');"),
        "marker": "indonesiaLandCover",
    },
    {
        "id": "cat6", "secondary": 6,
        "text": "Calculate the average precipitation for Alaska in 2021 using Python and GDAL, and output the result as a GeoTIFF file.",
        "gold": {
            "Platform": GDAL, "Programming_Language": "Python",
            "Analysis_Goal": "Calculate the average precipitation for Alaska in 2021",
            "Spatial_Extent": "Alaska", "Temporal_Extent": "2021",
            "Data_Source_and_Format": "CHIRPS precipitation data",
            "Analysis_Methodology": "Average precipitation calculation", "Output_Format": "GeoTIFF",
        },
        "aliases": {"platform": ["GDAL", "Python - GDAL"]},
        "language": "Python",
        "modules": [
            ("Collect 2021 CHIRPS rasters", "List the twelve monthly CHIRPS GeoTIFFs for 2021.", "CHIRPS monthly archive", "Sorted file list", "glob.glob"),
            ("Clip rasters to Alaska", "Subset each monthly raster to the Alaska bounding window.", "Monthly rasters", "In-memory clipped datasets", "gdal.Translate with projWin"),
            ("Average monthly precipitation", "Stack the clipped rasters and average them ignoring nodata.", "Clipped datasets", "Mean precipitation array", "numpy.stack, numpy.nanmean"),
            ("Write mean precipitation GeoTIFF", "Write the mean array with the source georeferencing.", "Mean array", "GeoTIFF file", "GTiff driver Create, SetGeoTransform, SetProjection"),
        ],
        "blocks": [
            ["import glob", "import numpy as np", "from osgeo import gdal"],
            ["chirps_paths = sorted(glob.glob(\"chirps-v2.0.2021.*.tif\"))"],
            ["alaska_window = [-170.0, 72.0, -129.0, 51.0]",
             "alaska_months = [gdal.Translate(\"/vsimem/alaska_%02d.tif\" % i, p, projWin=alaska_window) for i, p in enumerate(chirps_paths)]"],
            ["stack = np.stack([ds.GetRasterBand(1).ReadAsArray().astype(\"float64\") for ds in alaska_months])",
             "stack[stack < 0] = np.nan", "mean_precip = np.nanmean(stack, axis=0)"],
            ["driver = gdal.GetDriverByName(\"GTiff\")",
             "out = driver.Create(\"alaska_mean_precip_2021.tif\", mean_precip.shape[1], mean_precip.shape[0], 1, gdal.GDT_Float64)",
             "out.SetGeoTransform(alaska_months[0].GetGeoTransform())", "out.SetProjection(alaska_months[0].GetProjection())",
             "out.GetRasterBand(1).WriteArray(mean_precip)", "out.FlushCache()"],
        ],
        "fix": (4, "out = None"),
        "marker": "alaska_months",
    },
    {
        "id": "cat7", "secondary": 7,
        "text": "Export land cover classification data for California in 2020 as a CSV file using ArcGIS API for Python.",
        "gold": {
            "Platform": ARCGIS, "Programming_Language": "Python",
            "Analysis_Goal": "Export land cover classification data for California in 2020 as a CSV file",
            "Spatial_Extent": "California", "Temporal_Extent": "2020",
            "Data_Source_and_Format": "Land cover data",
            "Analysis_Methodology": "Land cover data export", "Output_Format": "CSV",
        },
        "aliases": {},
        "language": "Python",
        "modules": [
            ("Open land cover layer", "Connect anonymously and open the 2020 land cover feature layer.", "Layer URL", "FeatureLayer", "GIS(), FeatureLayer"),
            ("Query California 2020 records", "Query records for California in 2020.", "FeatureLayer", "FeatureSet", "FeatureLayer.query with a where clause"),
            ("Write CSV", "Convert the records to a DataFrame and write a CSV file.", "FeatureSet", "CSV file", "FeatureSet.sdf, DataFrame.to_csv"),
        ],
        "blocks": [
            ["from arcgis.gis import GIS", "from arcgis.features import FeatureLayer"],
            ["gis = GIS()", "land_cover = FeatureLayer(\"https://services.arcgis.com/land_cover_2020/FeatureServer/0\", gis=gis)"],
            ["ca_records = land_cover.query(where=\"STATE_NAME = 'California' AND YEAR = 2020\", out_fields=\"*\")"],
            ["ca_records.sdf.to_csv(\"california_land_cover_2020.csv\", index=False)"],
        ],
        "fix": (3, "print(len(ca_records.features), \"records exported\")"),
        "marker": "ca_records",
    },
    {
        "id": "cat8", "secondary": 8,
        "text": "Generate an interactive NDVI visualization map of the United States for 2020 using Python and Folium, with the result as an HTML file.",
        "gold": {
            "Platform": FOLIUM, "Programming_Language": "Python",
            "Analysis_Goal": "Generate an NDVI visualization map of the United States for 2020",
            "Spatial_Extent": "United States", "Temporal_Extent": "2020",
            "Data_Source_and_Format": "Landsat 8 imagery",
            "Analysis_Methodology": "NDVI calculation and visualization",
            "Output_Format": "Interactive map (HTML)",
        },
        "aliases": {"platform": ["Folium"], "output_format": ["HTML"]},
        "language": "Python",
        "modules": [
            ("Load Landsat 8 red and NIR", "Read the 2020 Landsat 8 red and NIR mosaics and their bounds.", "Band GeoTIFFs", "Red and NIR arrays, bounds", "rasterio.open, read"),
            ("Compute NDVI array", "Compute NDVI from the red and NIR arrays.", "Red and NIR arrays", "NDVI array", "NumPy arithmetic"),
            ("Build interactive NDVI map", "Overlay the NDVI array on a Folium map of the United States.", "NDVI array, bounds", "Folium map", "folium.Map, ImageOverlay, LayerControl"),
            ("Save HTML map", "Save the map as an HTML file.", "Folium map", "HTML file", "Map.save"),
        ],
        "blocks": [
            ["import folium", "import numpy as np", "import rasterio"],
            ["with rasterio.open(\"landsat8_us_2020_b4.tif\") as src:", "    red = src.read(1).astype(\"float32\")", "    bounds = src.bounds",
             "with rasterio.open(\"landsat8_us_2020_b5.tif\") as src:", "    nir = src.read(1).astype(\"float32\")"],
            ["us_ndvi = (nir - red) / (nir + red + 1e-6)"],
            ["us_map = folium.Map(location=[39.8, -98.6], zoom_start=4)", "folium.raster_layers.ImageOverlay(",
             "    image=np.clip(us_ndvi, 0, 1),", "    bounds=[[bounds.bottom, bounds.left], [bounds.top, bounds.right]],",
             "    colormap=lambda v: (0, v, 0, 0.7),", "    name=\"NDVI 2020\",", ").add_to(us_map)", "folium.LayerControl().add_to(us_map)"],
            ["us_map.save(\"us_ndvi_2020.html\")"],
        ],
        "fix": (2, "us_ndvi = np.nan_to_num(us_ndvi, nan=0.0)"),
        "marker": "us_ndvi",
    },
]

VERDICTS = {
    "cat1": (0, 0), "cat2": (0, 1), "cat3": (1, 2), "cat4": (0, 0),
    "cat5": (2, None), "cat6": (1, 1), "cat7": (0, 0), "cat8": (0, 4),
}

READABILITY = {
    "cat1": [8, 9, 7, 8, 9], "cat2": [9, 7, 8, 6, 10], "cat3": [7, 8, 8, 9, 6], "cat4": [9, 9, 8, 10, 8],
    "cat5": [6, 7, 7, 8, 5], "cat6": [8, 8, 9, 7, 8], "cat7": [10, 9, 9, 8, 9], "cat8": [7, 9, 8, 8, 10],
}


def comment_token(language):
    return "//" if language == "JavaScript" else "#"


def code_text(blocks):
    lines = []
    for b in blocks:
        if not b:
            continue
        if lines:
            lines.append("")
        lines.extend(b)
    return "\n".join(lines) + "\n"


def repaired_blocks(task):
    idx, line = task["fix"]
    blocks = [list(b) for b in task["blocks"]]
    blocks[idx].append(line)
    return blocks


def annotated_text(task, blocks):
    tok = comment_token(task["language"])
    gold = task["gold"]
    lines = [
        f"{tok} Created: {ANNOTATION_CREATED}",
        f"{tok} Platform: {gold['Platform']}",
        f"{tok} Description: {gold['Analysis_Goal']}",
    ]
    if blocks[0]:
        lines.append("")
        lines.append(f"{tok} Libraries")
        lines.extend(blocks[0])
    for (name, desc, *_), block in zip(task["modules"], blocks[1:]):
        lines.append("")
        lines.append(f"{tok} Step: {name}. {desc}")
        lines.extend(block)
    return "\n".join(lines) + "\n"


def design_json(task):
    return {
        "Document_Type": "Algorithm Design Document",
        "Algorithm": [
            {"Module_Sequence": i + 1, "Module_Name": m[0], "Module_Description": m[1], "Input": m[2],
             "Output": m[3], "Implementation_Details": m[4]}
            for i, m in enumerate(task["modules"])
        ],
    }


def extraction_json(task):
    return {"document_type": "User Requirements Document", "requirements": task["gold"]}


def fence(lang, code):
    return f"```{lang.lower()}\n{code}```"


def script_rules():
    rules = []
    for t in TASKS:
        draft = code_text(t["blocks"])
        fixed = code_text(repaired_blocks(t))
        rules += [
            {"stage_tag": "requirement_analysis", "match_substring": t["text"],
             "response": json.dumps(extraction_json(t), indent=2), "consume_once": False},
            {"stage_tag": "algorithm_design", "match_substring": t["gold"]["Analysis_Goal"],
             "response": json.dumps(design_json(t), indent=2), "consume_once": False},
            {"stage_tag": "code_implementation", "match_substring": t["modules"][0][0],
             "response": fence(t["language"], draft), "consume_once": False},
            {"stage_tag": "code_debugging", "match_substring": t["marker"],
             "response": fence(t["language"], fixed), "consume_once": False},
            {"stage_tag": "code_annotation", "match_substring": t["fix"][1],
             "response": annotated_text(t, repaired_blocks(t)), "consume_once": False},
            {"stage_tag": "code_annotation", "match_substring": t["marker"],
             "response": annotated_text(t, t["blocks"]), "consume_once": False},
        ]
    return rules


def corpus():
    out = []
    for t in TASKS:
        sec = t["secondary"]
        out.append({
            "id": t["id"],
            "primary_category": 1 if sec <= 3 else (2 if sec <= 6 else 3),
            "secondary_category": sec,
            "requirement_text": t["text"],
            "gold": extraction_json(t),
            "alias_sets": t["aliases"],
        })
    return out


def verdicts():
    out = []
    for task_id, (exe, correct) in VERDICTS.items():
        out.append({"task_id": task_id, "first_executable_revision": exe, "first_correct_revision": correct})
    return out


def check_unique_matches():
    # Each task's annotation and debug match strings must only occur in that task's code.
    for t in TASKS:
        for other in TASKS:
            if other is t:
                continue
            body = code_text(repaired_blocks(other)) + json.dumps(design_json(other)) + json.dumps(extraction_json(other))
            for needle in (t["fix"][1], t["marker"], t["modules"][0][0]):
                if needle in body:
                    raise SystemExit(f"match string {needle!r} of {t['id']} also occurs in {other['id']}")


def main():
    check_unique_matches()
    platforms = [dict(zip(FIELDS_PLATFORM, p)) for p in PLATFORMS]
    dump("kb/platform.json", platforms)
    dump("kb/function.json", function_records())
    dump("kb/dataset.json", dataset_records())
    dump("corpus.json", corpus())
    dump("script.json", script_rules())
    dump("verdicts.json", verdicts())
    dump("readability.json", READABILITY)
    for t in TASKS:
        path = os.path.join(ROOT, "requirements", t["id"] + ".txt")
        with open(path, "w", encoding="utf-8") as f:
            f.write(t["text"] + "\n")


if __name__ == "__main__":
    main()
