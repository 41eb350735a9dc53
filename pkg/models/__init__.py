"""
CLI 出力のデータモデル
"""
