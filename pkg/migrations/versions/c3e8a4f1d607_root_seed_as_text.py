"""Root seed as text

Revision ID: c3e8a4f1d607
Revises: 5b1d0c7e2a91
Create Date: 2026-10-17 15:40:02.517930

"""
from typing import Sequence, Union

from alembic import op
import sqlalchemy as sa


# revision identifiers, used by Alembic.
revision: str = 'c3e8a4f1d607'
down_revision: Union[str, Sequence[str], None] = '5b1d0c7e2a91'
branch_labels: Union[str, Sequence[str], None] = None
depends_on: Union[str, Sequence[str], None] = None


def upgrade() -> None:
    """Upgrade schema."""
    # root seeds run up to 2**64 - 1, past a signed BIGINT
    with op.batch_alter_table('experiment_runs') as batch_op:
        batch_op.alter_column('root_seed',
               existing_type=sa.BigInteger(),
               type_=sa.String(length=20),
               existing_nullable=False,
               postgresql_using='root_seed::text')


def downgrade() -> None:
    """Downgrade schema."""
    with op.batch_alter_table('experiment_runs') as batch_op:
        batch_op.alter_column('root_seed',
               existing_type=sa.String(length=20),
               type_=sa.BigInteger(),
               existing_nullable=False,
               postgresql_using='root_seed::bigint')
