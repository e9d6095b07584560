"""phasewave 服务层"""
