"""ConTrOn: continuously trained ontologies for technical data sheets.

The toolkit enriches a domain ontology with concepts harvested from data
sheets and an external knowledge base, then uses the enriched ontology to
pull property-value pairs back out of the data sheets.  An expert review
loop feeds corrections into subsequent enrichment iterations.
"""

__version__ = "0.1.0"
