/**
 * Variable-naming conventions shown in the component info boxes.
 * These sentences mirror the documented backend contract verbatim; keep
 * them in sync with the story-format reference.
 */

export const CONVENTIONS = {
  label: 'charts read the category (x-axis) from the "label" variable',
  value: 'charts and counters read the numeric value from the "value" variable',
  lat: 'maps read the decimal latitude from the "lat" variable',
  long: 'maps read the decimal longitude from the "long" variable',
  coordinates:
    'maps alternatively read a single "coordinates" variable, ' +
    'either "lat,lon" decimals or WKT "POINT(lon lat)"',
  name: 'maps label each point with the "name" variable',
  filters: "any additional map variable becomes a filter facet",
} as const;

export const PLACEHOLDER_SEARCH = "$SEARCH";
export const PLACEHOLDER_VALUE = "$VALUE";

interface InfoBoxSpec {
  fields: string[];
  conventions: string[];
  example: string;
}

/** Info-box content per component kind (the text editor has none). */
export const INFO_BOXES: Record<string, InfoBoxSpec> = {
  counter: {
    fields: [
      "label: the caption under the number",
      "query: a SELECT returning one numeric value",
    ],
    conventions: [CONVENTIONS.value],
    example:
      "SELECT (COUNT(?bell) AS ?value) WHERE { ?bell a <http://example.org/vocab#Bell> }",
  },
  chart: {
    fields: [
      "kind: bar, line, scatter or doughnut",
      "title: shown above the chart",
      "query: a SELECT projecting ?label and ?value",
    ],
    conventions: [CONVENTIONS.label, CONVENTIONS.value],
    example:
      "SELECT ?label (COUNT(?b) AS ?value) WHERE { ?b <p:province> ?label } GROUP BY ?label",
  },
  table: {
    fields: [
      "title: shown above the table",
      "query: any SELECT; audio, video and image URLs become players",
    ],
    conventions: [],
    example: "SELECT ?name ?audio WHERE { ?b <p:name> ?name ; <p:audio> ?audio }",
  },
  map: {
    fields: [
      "query: a SELECT with point coordinates",
      "filters: result variables offered as facet filters",
    ],
    conventions: [
      CONVENTIONS.lat, CONVENTIONS.long, CONVENTIONS.coordinates,
      CONVENTIONS.name, CONVENTIONS.filters,
    ],
    example:
      "SELECT ?lat ?long ?name ?province WHERE { ?b <p:lat> ?lat ; <p:long> ?long ... }",
  },
  text_search: {
    fields: [
      `query template: a SELECT containing ${PLACEHOLDER_SEARCH}, replaced by the search text`,
    ],
    conventions: [
      `every occurrence of ${PLACEHOLDER_SEARCH} is replaced with the escaped search string`,
    ],
    example:
      "SELECT ?name WHERE { ?b <p:name> ?name . FILTER(CONTAINS(STR(?name), $SEARCH)) }",
  },
  action: {
    fields: [
      "label: the button caption on result cells",
      `query template: a SELECT containing ${PLACEHOLDER_VALUE}`,
      "source: the id of an earlier text search or action",
      "column: the result variable whose cell value feeds the template",
    ],
    conventions: [
      `every occurrence of ${PLACEHOLDER_VALUE} is replaced with the escaped cell value`,
      "values from URI cells are inserted as <iri> terms",
    ],
    example: "SELECT ?property ?value WHERE { $VALUE ?property ?value }",
  },
};
