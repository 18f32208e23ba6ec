"""MatchEnt - Source Package"""
