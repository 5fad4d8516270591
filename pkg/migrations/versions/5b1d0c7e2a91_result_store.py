"""Result store

Revision ID: 5b1d0c7e2a91
Revises:
Create Date: 2026-10-17 09:12:44.118203

"""
from typing import Sequence, Union

from alembic import op
import sqlalchemy as sa


# revision identifiers, used by Alembic.
revision: str = '5b1d0c7e2a91'
down_revision: Union[str, Sequence[str], None] = None
branch_labels: Union[str, Sequence[str], None] = None
depends_on: Union[str, Sequence[str], None] = None


def upgrade() -> None:
    """Upgrade schema."""
    op.create_table('experiment_runs',
    sa.Column('id', sa.Integer(), nullable=False),
    sa.Column('experiment', sa.String(), nullable=False),
    sa.Column('root_seed', sa.BigInteger(), nullable=False),
    sa.Column('config', sa.JSON(), nullable=False),
    sa.Column('created_at', sa.DateTime(timezone=True), server_default=sa.text('CURRENT_TIMESTAMP'), nullable=True),
    sa.PrimaryKeyConstraint('id')
    )
    op.create_index(op.f('ix_experiment_runs_id'), 'experiment_runs', ['id'], unique=False)
    op.create_index(op.f('ix_experiment_runs_experiment'), 'experiment_runs', ['experiment'], unique=False)
    op.create_table('result_records',
    sa.Column('id', sa.Integer(), nullable=False),
    sa.Column('run_id', sa.Integer(), nullable=False),
    sa.Column('cell', sa.JSON(), nullable=False),
    sa.Column('trial', sa.Integer(), nullable=False),
    sa.Column('seed', sa.BigInteger(), nullable=False),
    sa.Column('metrics', sa.JSON(), nullable=False),
    sa.ForeignKeyConstraint(['run_id'], ['experiment_runs.id'], ondelete='CASCADE'),
    sa.PrimaryKeyConstraint('id')
    )
    op.create_index(op.f('ix_result_records_id'), 'result_records', ['id'], unique=False)
    op.create_index(op.f('ix_result_records_run_id'), 'result_records', ['run_id'], unique=False)


def downgrade() -> None:
    """Downgrade schema."""
    op.drop_index(op.f('ix_result_records_run_id'), table_name='result_records')
    op.drop_index(op.f('ix_result_records_id'), table_name='result_records')
    op.drop_table('result_records')
    op.drop_index(op.f('ix_experiment_runs_experiment'), table_name='experiment_runs')
    op.drop_index(op.f('ix_experiment_runs_id'), table_name='experiment_runs')
    op.drop_table('experiment_runs')
