"""polmon: monitor a political discussion on a microblogging platform.

Filter a tweet corpus by a keyword/hashtag rule set, build daily user
interaction graphs, infer user stance from followed political accounts,
and quantify polarization, influencers and communities.
"""

__version__ = "0.1.0"
