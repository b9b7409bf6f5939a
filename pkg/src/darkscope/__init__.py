"""darkscope: measurement toolkit for text-based dark patterns on shopping sites.

The pipeline runs in stages: build a shopping-site corpus, discover product
pages, simulate checkout flows while capturing snapshots, segment pages into
text units, cluster segments for analyst triage, monitor dynamic pages for
deceptive behavior, and compute taxonomy/prevalence statistics.
"""

__version__ = "0.1.0"
